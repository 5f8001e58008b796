from .configuration import (
    Configuration,
    MembraneInstance,
    initial_configuration,
    inject_input,
    make_inner_bag,
)
from .model import (
    Charge,
    DivideRule,
    EvolveRule,
    InnerMembrane,
    Rule,
    SendInRule,
    SendOutRule,
    SystemSpec,
    validate_system,
)
from .multiset import EMPTY, Multiset, mset_apply
from .rulebook import RuleBook

__all__ = [
    "Charge",
    "Configuration",
    "DivideRule",
    "EMPTY",
    "EvolveRule",
    "InnerMembrane",
    "MembraneInstance",
    "Multiset",
    "Rule",
    "RuleBook",
    "SendInRule",
    "SendOutRule",
    "SystemSpec",
    "initial_configuration",
    "inject_input",
    "make_inner_bag",
    "mset_apply",
    "validate_system",
]
