"""Named formats shipped as ``.fmt`` files."""
from importlib import resources

from . import dsl


def names() -> list:
    root = resources.files(__package__) / "cookbook"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".fmt"))


def text(name: str) -> str:
    return (resources.files(__package__) / "cookbook" / f"{name}.fmt").read_text(encoding="utf-8")


def load(name: str):
    return dsl.load(text(name))
