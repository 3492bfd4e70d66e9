"""Smart-home activity engine: weighted-threshold recognition of complex
activities, per-occurrence affect inference, and confidence-based
next-activity recommendation with confusion-matrix evaluation."""

__version__ = "0.1.0"
