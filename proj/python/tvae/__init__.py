from ._core import (
    ConfigError,
    Error,
    IoError,
    Model,
    NumericError,
    ParseError,
    ResourceLimitError,
    betti,
    generate,
    knn_overlap,
    load_csv,
    polar_transform,
    run_cli,
    train,
    winding_number,
)

__all__ = [
    "ConfigError",
    "Error",
    "IoError",
    "Model",
    "NumericError",
    "ParseError",
    "ResourceLimitError",
    "betti",
    "generate",
    "knn_overlap",
    "load_csv",
    "polar_transform",
    "run_cli",
    "train",
    "winding_number",
]
