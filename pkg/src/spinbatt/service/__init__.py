"""HTTP service wrapping the core package.

Request/response validation lives in `schemas`, the FastAPI application in
`app`.  The CLI talks to this service (in process by default, over the
network when pointed at a running server).
"""

from .app import app

__all__ = ["app"]
