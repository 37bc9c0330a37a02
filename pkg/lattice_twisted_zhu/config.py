from dataclasses import dataclass
from typing import Optional


SCHEMA_VERSION = 1

DEFAULT_CUTOFF = 4
DEFAULT_SEED = 0

COMMANDS = ('lattice', 'extension', 'twisted', 'zhu', 'aut', 'verify', 'all')

# normalization of Y_theta(iota(a), z): exponent of 2 is -<a,a>/2 ('half')
# or -<a,a> ('full'); 'calibrated' picks whichever matches the reduction engine
NORMALIZATIONS = ('half', 'full', 'calibrated')
DEFAULT_NORMALIZATION = 'calibrated'

# coordinate window used for sampled closure checks of K and of lifts
DEFAULT_WINDOW = 2

# isometry search is only attempted up to this rank
MAX_ISOMETRY_RANK = 8


@dataclass
class RunConfig:
    command: str
    input: str
    cutoff: int = DEFAULT_CUTOFF
    out: Optional[str] = None
    seed: int = DEFAULT_SEED
    normalization: str = DEFAULT_NORMALIZATION
    log_level: str = 'WARNING'
    samples: int = 100

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f'unknown command {self.command!r}, expected one of {COMMANDS}')
        if self.cutoff < 2:
            raise ValueError(f'cutoff must be >= 2, got {self.cutoff}')
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f'unknown normalization {self.normalization!r}')
