"""I/O module exports."""
from .device_config import DeviceConfig, list_presets, load_device
from .csv_io import read_fg_datasets, read_spectra, write_rows, write_spectra

__all__ = [
    "DeviceConfig",
    "list_presets",
    "load_device",
    "read_fg_datasets",
    "read_spectra",
    "write_rows",
    "write_spectra",
]
