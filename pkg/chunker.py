"""
Enumeration Chunking Module.
Splits the words of one length into disjoint blocks so that counting can
be spread over worker processes and summed back exactly. A base of length
n stands for its n lassos, one per loop start.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Iterator

from config import BLOCKS_PER_JOB

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WordBlock:
    """All words of one length whose first letters are `head`."""

    length: int
    head: tuple[int, ...]

    def words(self, alphabet_size: int) -> Iterator[tuple[int, ...]]:
        """Lexicographic over the free tail."""
        for tail in itertools.product(range(alphabet_size), repeat=self.length - len(self.head)):
            yield self.head + tail

    def size(self, alphabet_size: int) -> int:
        return alphabet_size ** (self.length - len(self.head))


class EnumerationChunker:
    """
    Partitions word enumeration into blocks.
    Blocks are disjoint, cover all |Σ|^length words exactly and come in
    lexicographic order, so block-wise sums are order-independent.
    """

    def __init__(self, jobs: int = 1, blocks_per_job: int = BLOCKS_PER_JOB):
        """
        Args:
            jobs: Number of workers the blocks are meant for.
            blocks_per_job: Target number of blocks per worker.
        """
        if jobs < 1:
            raise ValueError("jobs must be at least 1.")
        self.jobs = jobs
        self.blocks_per_job = blocks_per_job

    def word_blocks(self, alphabet_size: int, length: int) -> list[WordBlock]:
        """Blocks covering all words of the given length (bases of lassos, or loops)."""
        if length < 1:
            raise ValueError("Word length must be at least 1.")
        head_length = self._head_length(alphabet_size, length)
        blocks = [
            WordBlock(length, head)
            for head in itertools.product(range(alphabet_size), repeat=head_length)
        ]
        logger.debug(
            f"Split length {length} over |Σ|={alphabet_size} into {len(blocks)} blocks "
            f"(head length {head_length}, jobs={self.jobs})."
        )
        return blocks

    # ─── Private Methods ─────────────────────────────────────────────────

    def _head_length(self, alphabet_size: int, length: int) -> int:
        """Shortest fixed head giving at least jobs·blocks_per_job blocks."""
        if self.jobs == 1:
            return 0
        target = self.jobs * self.blocks_per_job
        head_length = 0
        while head_length < length and alphabet_size ** head_length < target:
            head_length += 1
        return head_length
