"""Typer command-line application."""

from .app import app, exit_code_for_error, main

__all__ = ["app", "exit_code_for_error", "main"]
