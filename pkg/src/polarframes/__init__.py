"""Polarity frames with a ternary relation, the substructural logics they
interpret, their sorted modal companions and first-order translations."""

__version__ = "0.1.0"

from .frame import Frame, FrameError, load_frame, parse_frame_text  # noqa: E402
from .kernels import active_backend, compiled_available  # noqa: E402
from .semantics import ML2Model, SubModel, entails_ml2, entails_sub, eval_ml2, eval_sub  # noqa: E402
from .syntax import ParseError, SortError, parse_ml2, parse_sequent, parse_sub, print_formula  # noqa: E402
from .translate import bullet, circ, verify_faithfulness  # noqa: E402

__all__ = [
    "Frame", "FrameError", "load_frame", "parse_frame_text", "active_backend", "compiled_available",
    "ML2Model", "SubModel", "entails_ml2", "entails_sub", "eval_ml2", "eval_sub",
    "ParseError", "SortError", "parse_ml2", "parse_sequent", "parse_sub", "print_formula",
    "bullet", "circ", "verify_faithfulness",
]
