"""Configuration constants for result files."""

# --- Formats ---
FORMATS = ("csv", "json", "dat", "svg", "db")
DEFAULT_FORMATS = ("csv", "json")

# --- Numeric Formatting ---
# 9 significant digits; parsing the text back and re-emitting is byte-identical
CSV_FLOAT_FORMAT = "%.9g"
DAT_FLOAT_FORMAT = "%.10g"

# --- File Naming ---
TIMESTAMP_FORMAT = "%Y%m%dT%H%M%S"
