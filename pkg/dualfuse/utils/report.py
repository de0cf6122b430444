"""Terminal messages for the CLI, in the `[Type] title: message` layout"""
__all__ = ['ERROR', 'INFO', 'WARNING', 'show', 'showinfo', 'showwarning', 'showerror', 'showvalues']

import sys

# message types
ERROR = "error"
INFO = "info"
WARNING = "warning"


def show(msg_type, title='', message='', detail='', *, stream=None):
    """Print one message.
    Args:
        msg_type: one of ERROR, INFO, WARNING
        title: short origin of the message (eg. a subcommand or stage name)
        message: the message body
        detail: optional extra line(s)
        stream: defaults to stderr, so stdout stays machine-readable
    Returns:
        the printed text
    """
    if msg_type not in (ERROR, INFO, WARNING):
        raise ValueError(f"Unknown message type: '{msg_type}'")
    text = (
        f"[{msg_type.capitalize()}]" # eg. [Error]
        + (f" {title}: " if title and title.lower() != msg_type else ' ') # avoid "[Error] error:"
        + message
        + ('\n' + detail if detail else '')
    )
    print(text, file=stream or sys.stderr)
    return text


def showinfo(title=None, message=None, **options):
    "Show an info message"
    return show(INFO, title or '', message or '', **options)


def showwarning(title=None, message=None, **options):
    "Show a warning message"
    return show(WARNING, title or '', message or '', **options)


def showerror(title=None, message=None, **options):
    "Show an error message"
    return show(ERROR, title or '', message or '', **options)


def showvalues(values, *, stream=None):
    """Print `key=value` lines to stdout (machine-readable report).
    Floats are printed with 6 decimals.
    """
    lines = []
    for key, value in values.items():
        if isinstance(value, float):
            value = f"{value:.6f}"
        lines.append(f"{key}={value}")
    print('\n'.join(lines), file=stream or sys.stdout)
    return lines
