"""Strategy language: parsing, linking, execution and derivation trees."""
from .ast import (Fail, Id, LiteralDist, Macro, Match, NamedDist, One, OrElse, PPick,
                  Repeat, Seq, SetPos, Strategy, While, seq, to_text)
from .interpreter import ExecOutcome, Interpreter, StepLimitExceeded, execute
from .parser import UdfRegistry, link, parse_strategy, register_udf
from .tree import DerivationTree, Step, TreeNode, export_tree

__all__ = [
    "Fail", "Id", "LiteralDist", "Macro", "Match", "NamedDist", "One", "OrElse", "PPick",
    "Repeat", "Seq", "SetPos", "Strategy", "While", "seq", "to_text",
    "ExecOutcome", "Interpreter", "StepLimitExceeded", "execute",
    "UdfRegistry", "link", "parse_strategy", "register_udf",
    "DerivationTree", "Step", "TreeNode", "export_tree",
]
