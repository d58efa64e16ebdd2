"""Accessibility scanner and fix suggester for MiniUI projects.

Thin wrapper over the native module: JSON strings from the C++ side become
plain dicts and lists here.
"""

import json as _json

try:
    from . import _minia11y as _native
except ImportError:  # built in place rather than installed
    import _minia11y as _native

from ._version import __version__

ManifestError = _native.ManifestError
SourceSyntaxError = _native.SourceSyntaxError
BackendError = _native.BackendError

reformat = _native.reformat
instrument_source = _native.instrument_source
relative_luminance = _native.relative_luminance
contrast_ratio = _native.contrast_ratio
required_contrast = _native.required_contrast
issue_kinds = _native.issue_kinds


def hierarchy(text, root_view):
    """Accessibility hierarchy of a single-file project, as a dict."""
    return _json.loads(_native.hierarchy_json(text, root_view))


def render(text, root_view, **device):
    """Resolved scene of a single-file project, as a dict."""
    return _json.loads(_native.render_json(text, root_view, **device))


def scan_source(text, root_view, **device):
    """Issues found on one screen of a single-file project."""
    return _json.loads(_native.scan_source(text, root_view, **device))


def scan(project_dir, out_dir):
    """Scan a project directory into a run store; returns the summary."""
    return _json.loads(_native.run_scan(str(project_dir), str(out_dir)))


def suggest(run_dir, **options):
    """Run the repair loop over a scanned run; returns the summary."""
    return _json.loads(_native.run_suggest(str(run_dir), **options))


def report(run_dir):
    """Aggregate a run into report.json; returns {"json": ..., "text": ...}."""
    return _json.loads(_native.run_report(str(run_dir)))


__all__ = [
    "__version__",
    "ManifestError",
    "SourceSyntaxError",
    "BackendError",
    "reformat",
    "instrument_source",
    "relative_luminance",
    "contrast_ratio",
    "required_contrast",
    "issue_kinds",
    "hierarchy",
    "render",
    "scan_source",
    "scan",
    "suggest",
    "report",
]
