"""Package init file."""
