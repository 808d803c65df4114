"""Subcycle quantum tomography of pulsed squeezed and photon-subtracted light."""
__version__ = "0.1.0"
