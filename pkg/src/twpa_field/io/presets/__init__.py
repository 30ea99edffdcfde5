"""内置器件预设 (JSON)."""
