"""Clock synchronization protocols for mobile robotic sensor networks, with a
deterministic discrete-event simulator to compare them."""

__version__ = "0.1.0"
