"""Data loaders package"""

from data.loaders.document_loader import (
    DocumentLoader,
    Frame,
    TableDocument,
    FieldDocument,
    InitialDataDocument,
)

__all__ = ['DocumentLoader', 'Frame', 'TableDocument', 'FieldDocument', 'InitialDataDocument']
