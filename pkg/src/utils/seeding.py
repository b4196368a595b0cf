# -*- coding: utf-8 -*-
"""
Seed derivation.

Every parallel unit of work owns a stream derived from (master seed, index,
purpose), so results do not depend on worker count or scheduling order.
"""

from enum import IntEnum

import numpy as np


class Stream(IntEnum):
    """Purposes a derived seed can serve; distinct values give independent streams."""

    ANSATZ = 0
    INIT_PARAMS = 1
    TRIALS = 2


def derive_seed(master_seed: int, index: int, stream: Stream) -> int:
    """A 32-bit seed for one (master seed, index, stream) triple."""
    sequence = np.random.SeedSequence([master_seed, index, int(stream)])
    return int(sequence.generate_state(1)[0])


def derive_generator(master_seed: int, index: int, stream: Stream) -> np.random.Generator:
    """A generator for one (master seed, index, stream) triple."""
    return np.random.default_rng(np.random.SeedSequence([master_seed, index, int(stream)]))
