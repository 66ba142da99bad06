"""Request/response models, handlers, and the HTTP app.

The handlers are the single implementation of every command; the CLI
calls them in process and the HTTP app exposes them as endpoints, so
both fronts produce the same reports byte for byte (duration aside).
"""
