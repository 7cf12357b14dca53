"""Twists of smooth plane quartics over Q, constructed and checked exactly."""

__version__ = "0.1.0"
