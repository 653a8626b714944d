"""KLR algebras: normal forms, modules, fixtures."""

from .algebra import (KLRAlgebra, BudgetExceeded, ParseError, normal_form, format_element,
                      element_to_json, graded_dim_hom_space, parse_expression)
from .modules import (FiniteModule, ModuleShapeError, ModuleVerdict, verify_module, induce,
                      intertwiners, cuspidal_module, trivial_module, twist_label_order)
from .fixtures import appendix_fixtures, g2_five_dim_module

__all__ = [
    "KLRAlgebra", "BudgetExceeded", "ParseError", "normal_form", "format_element", "element_to_json",
    "graded_dim_hom_space", "parse_expression", "FiniteModule", "ModuleShapeError", "ModuleVerdict",
    "verify_module", "induce", "intertwiners", "cuspidal_module", "trivial_module",
    "twist_label_order", "appendix_fixtures", "g2_five_dim_module",
]
