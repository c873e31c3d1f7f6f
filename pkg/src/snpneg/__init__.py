"""CWA and negation-as-failure for propositional deductive databases,
computed three ways: failure-operator iteration, SLD resolution, and a
compiled spiking neural P system."""

from .kb import DeductiveDatabase, Interpretation, Rule, parse_kb
from .semantics import cwa_set, failure_operator, iterate_failure, naf_set
from .sld import classify, failure_set
from .compiler import compile_kb, failure_via_snp, iterate_via_snp

__version__ = "0.1.0"
