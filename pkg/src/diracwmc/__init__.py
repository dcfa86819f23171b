"""Typed Dirac-notation expressions compiled to weighted model counting."""

from .counting import wmc_count
from .encodings import EncodingString, QStateEncoding, enc_equals, enc_equiv, enc_validity
from .errors import (
    ComponentTooLargeError,
    DenseSizeError,
    DiracSyntaxError,
    DiracTypeError,
    EncodingError,
    ExportError,
    ModelError,
    WcnfParseError,
    WmcError,
)
from .kernel import BACKEND
from .lang import Bra, Const, Entry, Ket, Kron, MatAdd, MatMul, SAdd, ScalMul, SMul, Trace, Trans, typecheck
from .logic import VarPool, WeightFunction
from .models import IsingModel, PottsModel, TfimModel
from .parser import parse, to_text
from .reps import MatrixRep, ScalarRep, compile_expr, rep_value
from .values import dense_matexp, eval_value
from .wcnf import export_rep, export_wcnf, load_rep, parse_wcnf

__version__ = "0.1.0"
