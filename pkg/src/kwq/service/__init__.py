from .app import create_app, app  # noqa: F401
