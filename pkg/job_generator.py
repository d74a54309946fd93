"""
Work Chunks for an ICF Run

An ICF run estimates one trace per (variant, step): the interacting
Hamiltonian (variant 0) and, when ΔC is formed from independent circuits, the
free Hamiltonian (variant 1), each at steps 0..N. This module enumerates those
units of work.

Classes:
    Chunk: One (variant, step) unit with the parts to measure
    JobGenerator: Enumerates the chunks of a run

Example:
     generator = JobGenerator(steps=15, parts=(Part.REAL,), variants=(INTERACTING,))
     len(generator)
    16
     for chunk in generator.build_chunks():
         # assemble and estimate
         pass
"""

# Standard library imports
import itertools
from dataclasses import dataclass
from typing import Generator, Sequence, Tuple

# Local imports
from block_encoding import Part

INTERACTING = 0
FREE = 1


@dataclass(frozen=True)
class Chunk:
    variant: int
    step: int
    parts: Tuple[Part, ...]


class JobGenerator(object):
    """
    Generates the (variant, step) chunks of a run.

    Attributes:
        steps (int): N; steps 0..N are generated
        parts (Tuple[Part, ...]): Parts measured in every chunk
        variants (Tuple[int, ...]): INTERACTING and/or FREE
        size (int): Number of chunks
    """

    def __init__(self, steps: int, parts: Sequence[Part], variants: Sequence[int] = (INTERACTING,)):
        self.steps = steps
        self.parts = tuple(parts)
        self.variants = tuple(variants)
        self.size = len(self.variants) * (steps + 1)

    def __len__(self):
        return self.size

    def build_chunks(self) -> Generator[Chunk, None, None]:
        """Yields chunks variant-major, steps ascending."""
        for variant, step in step_grid(self.steps, self.variants):
            yield Chunk(variant, step, self.parts)


def step_grid(steps: int, variants: Sequence[int]):
    return itertools.product(variants, range(steps + 1))
