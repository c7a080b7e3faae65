"""Asynchronous-circuit model of DES with explicit-state verification tools:
state-space exploration, bisimulation reduction, property checks, and a
concrete executable prototype."""

from asyncdes.desfunc import ABSTRACT, CONCRETE, Word, des_apply, key_schedule

__all__ = ["ABSTRACT", "CONCRETE", "Word", "des_apply", "key_schedule"]
