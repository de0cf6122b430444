"""Observer pattern, modified from original source found at https://github.com/ajongbloets/julesTk
Used by the fusion pipeline to announce finished stages.
Observers are held weakly.
"""

# MIT License
#
# Copyright (c) 2017 Joeri Jongbloets
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

__all__ = ['Observable', 'Observer']

from abc import ABC, abstractmethod
from functools import wraps
from weakref import WeakSet


class Observable:
    """Notifies its observers whenever it changes.

    Either call `notify()` after updating state, or decorate the updating
    method with `@Observable.observed`. One registration per observer.
    """

    def __init__(self):
        self._observers = WeakSet()

    def attach(self, observer):
        """Register an observer. Attaching twice is a no-op.

        Raises:
            TypeError: `observer` is not an Observer
        """
        if not isinstance(observer, Observer):
            raise TypeError(f"Expected an Observer, not {type(observer).__name__}")
        self._observers.add(observer)

    def detach(self, observer):
        """Remove an observer if it is attached"""
        if not isinstance(observer, Observer):
            raise TypeError(f"Expected an Observer, not {type(observer).__name__}")
        self._observers.discard(observer)

    @property
    def observers(self):
        return list(self._observers)

    def notify(self):
        """Notifies all observers. Observer failures propagate (fail fast)."""
        for observer in list(self._observers):
            observer.update(self)

    @staticmethod
    def observed(f):
        """Decorator calling `notify` after the wrapped method returns normally"""
        @wraps(f)
        def magic(self, *args, **kwargs):
            result = f(self, *args, **kwargs)
            self.notify()
            return result
        return magic


class Observer(ABC):
    """Implement `update` to handle notifications"""

    @abstractmethod
    def update(self, observable):
        """Handle a notification from an observed object"""
        raise NotImplementedError
