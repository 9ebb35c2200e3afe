"""
active-localize - Active multi-target localization simulator.

Bayesian histogram filtering, Fisher-information planning and a small
TD3 policy for a robot localizing targets from bearing or range readings.
"""

__version__ = "0.1.0"
