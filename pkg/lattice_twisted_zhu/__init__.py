from .lattice import GramMatrix, load_lattice, validate
from .extension import build_cocycle, build_extension
from .voa import LatticeVOA, weight_one_lie_algebra
from .twisted import TwistedModule, twisted_modules
from .zhu import ZhuReducer, build_zhu, zhu_structure
from .aut import aut_report, lift_isometry, theta_lift, verify_automorphism
from .reporting import save_report
