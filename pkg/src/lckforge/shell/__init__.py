"""Model files, expression parsing, printing and the command line."""
from .parser import ParseError, load_model, parse_endo, parse_endo_series, parse_form, parse_form_series, parse_model
from .printer import emit_json, endo_json, form_json, format_endo, format_form, format_scalar

__all__ = [
    "ParseError",
    "load_model",
    "parse_endo",
    "parse_endo_series",
    "parse_form",
    "parse_form_series",
    "parse_model",
    "emit_json",
    "endo_json",
    "form_json",
    "format_endo",
    "format_form",
    "format_scalar",
]
