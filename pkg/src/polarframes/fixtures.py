"""Bundled example frames.

``fneq``  all subsets stable (polars are complementation)
``fw``    as fneq plus x1 R x0 x0
``f1``    stable sets form a 3-chain
``f1r``   f1 plus x0 R x0 x0
``fm3``   stable sets form M3
``fm3r``  fm3 plus x1 R x2 x3
``fm3s``  fm3 plus x1 R x1 x2
"""

from importlib import resources

from .frame import Frame, parse_frame_text

NAMES = ("fneq", "fw", "f1", "f1r", "fm3", "fm3r", "fm3s")


def fixture_text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(NAMES)}")
    return resources.files(__package__).joinpath("data", f"{name}.frame").read_text(encoding="utf-8")


def fixture(name: str) -> Frame:
    return parse_frame_text(fixture_text(name), name=name).frame
