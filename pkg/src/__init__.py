"""kickrotor - Coherent control of dynamical localization in laser-kicked molecular rotors."""

__version__ = "0.4.0"
