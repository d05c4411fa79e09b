"""Assembly line balancing formulations, LP relaxations and exact oracles."""

from salbp.bounds import Type1, Type2, make_bounds_context
from salbp.instances import Instance, parse_alb, random_instance, read_instance

__all__ = ["Instance", "Type1", "Type2", "make_bounds_context", "parse_alb", "random_instance", "read_instance"]
__version__ = "0.1.0"
