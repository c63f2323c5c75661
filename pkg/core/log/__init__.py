
__all__ = [
    "record_handler"
]
