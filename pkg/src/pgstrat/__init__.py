"""Attributed port graph rewriting with a strategy language, and a
rational-negligence market model built on it."""
from .errors import (ConfigError, DanglingEdgeError, DistributionError, EvalError,
                     ExprSyntaxError, GraphError, LinkError, PgStratError, StrategySyntaxError)
from .graph import Edge, GraphBuilder, Port, PortGraph, Violation, validate
from .iso import isomorphic
from .matching import Morphism, find_matches
from .records import EMPTY, Record, Signature, Term, Var
from .rewrite import RewriteResult, apply, rewrite
from .rules import ArrowPort, ArrowPortType, RewriteRule, RuleBuilder, validate_rule
from .serialize import (graph_from_json, graph_to_dot, graph_to_json, rule_from_dict,
                        rule_to_dict)
from .strategy import DerivationTree, UdfRegistry, execute, link, parse_strategy

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DanglingEdgeError", "DistributionError", "EvalError", "ExprSyntaxError",
    "GraphError", "LinkError", "PgStratError", "StrategySyntaxError",
    "Edge", "GraphBuilder", "Port", "PortGraph", "Violation", "validate", "isomorphic",
    "Morphism", "find_matches", "EMPTY", "Record", "Signature", "Term", "Var",
    "RewriteResult", "apply", "rewrite", "ArrowPort", "ArrowPortType", "RewriteRule",
    "RuleBuilder", "validate_rule", "graph_from_json", "graph_to_dot", "graph_to_json",
    "rule_from_dict", "rule_to_dict", "DerivationTree", "UdfRegistry", "execute", "link",
    "parse_strategy", "__version__",
]
