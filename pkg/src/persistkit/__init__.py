"""Persistence probabilities of long-range dependent processes.

Monte Carlo samplers for fractional Gaussian noise, random walks in random
scenery and the Matheron-de Marsily walk, exact enumeration oracles for the
range and return-time identities, and persistence-exponent fits.
"""
import warnings

# numba warns when the TBB threading layer is older than it expects; the
# default workqueue layer is used instead, so the warning carries no signal
warnings.filterwarnings("ignore", message=".*TBB.*")

__version__ = "0.1.0"
