"""Plain-text key=value files, shared by fusion configs and scene specs.

Format: one `key=value` per line, `#` starts a comment, blank lines ignored.
Keys are case-sensitive and may repeat only if the caller allows it.
"""
__all__ = ['parse', 'load', 'dump', 'dumps']

from pathlib import Path


def parse(text, *, allow_repeat=False) -> dict[str, str]:
    """Parse key=value text.
    Args:
        text: file contents
        allow_repeat: if True, repeated keys collect into a list of strings
    Returns:
        Dict of raw string values (lists for repeated keys when allowed)
    Raises:
        ValueError: a line without '=', an empty key, or a repeated key
    """
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ValueError(f"line {lineno}: expected key=value, got '{raw.strip()}'")
        key, value = (s.strip() for s in line.split('=', 1))
        if not key:
            raise ValueError(f"line {lineno}: empty key")
        if key in out:
            if not allow_repeat:
                raise ValueError(f"line {lineno}: repeated key '{key}'")
            if not isinstance(out[key], list):
                out[key] = [out[key]]
            out[key].append(value)
        elif allow_repeat:
            out[key] = [value]
        else:
            out[key] = value
    return out


def load(path, **kw) -> dict[str, str]:
    return parse(Path(path).read_text(encoding='utf-8'), **kw)


def dumps(values, header=None) -> str:
    """Format a mapping as key=value text. List values emit one line each."""
    lines = [f"# {header}"] if header else []
    for key, value in values.items():
        for v in (value if isinstance(value, list) else [value]):
            lines.append(f"{key}={v}")
    return '\n'.join(lines) + '\n'


def dump(path, values, header=None):
    Path(path).write_text(dumps(values, header), encoding='utf-8')
