"""HTTP wrapper around the detector: streaming sessions, scoring and synthesis."""
