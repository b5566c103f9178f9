"""shapebench: deterministic compositional shape-reasoning benchmark tooling.

Generates paired pure-text/image tasks with verifiable answers and reference
traces, scores model completions with format/accuracy/caption/progress
rewards, and computes group-relative advantages for external RL trainers.
"""

__version__ = "0.1.0"
