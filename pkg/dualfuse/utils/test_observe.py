import pytest

from .observe import Observable, Observer


class Counter(Observable):
    def __init__(self):
        super().__init__()
        self.value = 0

    @Observable.observed
    def bump(self):
        self.value += 1
        return self.value


class Listener(Observer):
    def __init__(self):
        self.seen = []

    def update(self, observable):
        self.seen.append(observable.value)


def test_observed_notifies():
    c, l = Counter(), Listener()
    c.attach(l)
    c.attach(l)
    assert c.bump() == 1
    c.bump()
    assert l.seen == [1, 2]

def test_detach():
    c, l = Counter(), Listener()
    c.attach(l)
    c.detach(l)
    c.bump()
    assert l.seen == []

def test_rejects_non_observer():
    with pytest.raises(TypeError):
        Counter().attach(object())

def test_weak_reference():
    c = Counter()
    c.attach(Listener())
    import gc; gc.collect()
    assert c.observers == []
