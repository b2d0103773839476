"""Maritime anomaly detection over AIS position reports."""

__version__ = "0.1.0"
