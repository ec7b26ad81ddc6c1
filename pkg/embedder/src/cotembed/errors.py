class EmbedError(Exception):
    """Base class for extraction failures."""


class ModelLoadError(EmbedError):
    """The model or tokenizer could not be loaded."""


class DatasetError(EmbedError):
    """A dataset record is unusable (bad JSON, missing or empty text field)."""
