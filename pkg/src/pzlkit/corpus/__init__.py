"""The shipped puzzle corpus: rule files, desk-scale dimensions, and the
independent classic-rules validators.

Rule files live in the repository's top-level ``corpus/`` directory (one
``<name>.rule`` plus ``<name>.notes.md`` per puzzle); ``PZL_CORPUS_DIR``
overrides the location.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from ..dsl import Rule, parse_rule
from ..errors import PzlError
from ..grid import GridDims
from .validators import VALIDATORS, oracle_validate

__all__ = ["CorpusEntry", "ENTRIES", "corpus_dir", "load_rule", "oracle_validate", "table_entries"]


def corpus_dir() -> Path:
    env = os.environ.get("PZL_CORPUS_DIR")
    if env:
        return Path(env)
    repo = Path(__file__).resolve().parents[3] / "corpus"
    if repo.is_dir():
        return repo
    return Path.cwd() / "corpus"


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    title: str
    desk_dims: GridDims  # generation + oracle verification size
    exhaustive_dims: GridDims | None  # where complete enumeration is feasible
    presentation: bool  # whether unique-problem masking is supported
    deviations: tuple = ()  # notes on departures from the published text
    variant_of: str | None = None

    @property
    def path(self) -> Path:
        return corpus_dir() / f"{self.name}.rule"

    def load(self) -> Rule:
        return load_rule(self.name)


def load_rule(name: str) -> Rule:
    path = corpus_dir() / f"{name}.rule"
    if not path.is_file():
        raise PzlError(f"no corpus rule file at {path}")
    return parse_rule(path.read_text())


ENTRIES = {
    e.name: e
    for e in (
        CorpusEntry(
            "choco_banana",
            "Choco Banana",
            GridDims(4, 4),
            GridDims(2, 2),
            True,
            deviations=(
                "same-family regions may not touch (classic maximal-area reading)",
            ),
        ),
        CorpusEntry(
            "kurotto",
            "Kurotto",
            GridDims(4, 4),
            GridDims(2, 2),
            True,
            deviations=(
                "clue guard excludes the shading mark",
                "adjacent blocks counted once; see kurotto_literal for the per-neighbour reading",
            ),
        ),
        CorpusEntry(
            "fillomino",
            "Fillomino",
            GridDims(4, 4),
            GridDims(2, 2),
            True,
        ),
        CorpusEntry(
            "inshi_no_heya",
            "Inshi no heya",
            GridDims(4, 4),
            GridDims(3, 3),
            True,
            deviations=(
                "cells carry 1..n (published text leaves them null)",
                "room alphabet bounded by n^n instead of n*factorial(n)",
                "line size written as n instead of the literal 9",
            ),
        ),
        CorpusEntry(
            "hitori",
            "Hitori",
            GridDims(4, 4),
            GridDims(3, 3),
            False,  # hidden set cannot present black cells; kept as published
            deviations=(
                "rows/columns pinned to full length",
                "black-adjacency condition split out of the membership biconditional",
            ),
        ),
        CorpusEntry(
            "sudoku",
            "Sudoku",
            GridDims(4, 4),
            GridDims(4, 4),
            True,
            deviations=("sizes parameterized: n = m = k^2, line size n",),
        ),
        CorpusEntry(
            "sukoro",
            "Sukoro",
            GridDims(4, 4),
            GridDims(2, 2),
            False,  # hidden masks every cell, so problems are never unique
            deviations=(
                "count and difference conditions guarded to numbered cells",
            ),
        ),
        CorpusEntry(
            "norinori",
            "Norinori",
            GridDims(4, 4),
            GridDims(2, 2),
            False,
            deviations=(),
        ),
        CorpusEntry(
            "shikaku",
            "Shikaku",
            GridDims(4, 4),
            GridDims(2, 2),
            True,
        ),
        CorpusEntry(
            "slitherlink",
            "Slitherlink",
            GridDims(4, 4),
            GridDims(2, 2),
            True,
            deviations=(
                "point condition relaxed to cross in {0, 2}",
                "membership direction completed to a biconditional",
            ),
        ),
        CorpusEntry(
            "kurotto_literal",
            "Kurotto (per-neighbour variant)",
            GridDims(4, 4),
            GridDims(2, 2),
            True,
            deviations=("per-neighbour clue sum as published",),
            variant_of="kurotto",
        ),
    )
}


def table_entries() -> list[CorpusEntry]:
    """The ten verified puzzles, without variants."""
    return [e for e in ENTRIES.values() if e.variant_of is None]
