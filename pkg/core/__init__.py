"""
Движок нечеткой категорной семиотики: алгебры, Ω-множества, диаграммы,
грамматики знаков, модели и вывод
"""

from .algebra import make_algebra, validate_algebra
from .relation import OmegaSet, MultiMorphism, make_omega_set, compose, classify
from .diagram import MultiDiagram, Arrow, limit, colimit, commutativity_degree
from .grammar import Ontology, Library, Configuration, validate_configuration
from .semiotic import Semiotic, validate_model, integrate, encode_dataset
from .inference import HypothesisPool, gamma, consistency_check, entails, eval_rl
from .workspace import load_spec, parse_spec

__all__ = [
    'make_algebra',
    'validate_algebra',
    'OmegaSet',
    'MultiMorphism',
    'make_omega_set',
    'compose',
    'classify',
    'MultiDiagram',
    'Arrow',
    'limit',
    'colimit',
    'commutativity_degree',
    'Ontology',
    'Library',
    'Configuration',
    'validate_configuration',
    'Semiotic',
    'validate_model',
    'integrate',
    'encode_dataset',
    'HypothesisPool',
    'gamma',
    'consistency_check',
    'entails',
    'eval_rl',
    'load_spec',
    'parse_spec',
]
