"""
Алгебры истинностных значений (ML-алгебры): связки, делимость,
проверка законов и конечные произведения алгебр.
"""

import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np

from config.settings import GRID_STEPS
from .errors import AlgebraError
from .utils import current_epsilon

logger = logging.getLogger(__name__)

UNIT_INTERVAL_KINDS = ("godel", "lukasiewicz", "product")
CONNECTIVES = ("tensor", "residuum", "join", "meet", "biimp", "neg")


class Algebra(ABC):
    """
    Ограниченная коммутативная резидуированная решетка.
    Значения неизменяемы, все операции чистые.
    """

    kind = "abstract"

    def __init__(self, epsilon=None):
        self.epsilon = current_epsilon() if epsilon is None else float(epsilon)

    @property
    @abstractmethod
    def bot(self):
        ...

    @property
    @abstractmethod
    def top(self):
        ...

    @property
    def is_finite(self):
        return self.carrier is not None

    @property
    def carrier(self):
        """Конечный носитель или None для [0,1]."""
        return None

    @abstractmethod
    def tensor(self, x, y):
        ...

    @abstractmethod
    def residuum(self, x, y):
        ...

    @abstractmethod
    def join(self, x, y):
        ...

    @abstractmethod
    def meet(self, x, y):
        ...

    @abstractmethod
    def leq(self, x, y):
        ...

    @abstractmethod
    def eq(self, x, y):
        ...

    @abstractmethod
    def check_value(self, x):
        """Проверяет принадлежность носителю и возвращает нормализованное значение."""

    @abstractmethod
    def values(self):
        """Конечный носитель или детерминированная выборка для [0,1]."""

    def biimp(self, x, y):
        return self.tensor(self.residuum(x, y), self.residuum(y, x))

    def neg(self, x):
        return self.residuum(x, self.bot)

    def is_top(self, x):
        return self.eq(x, self.top)

    def is_bot(self, x):
        return self.eq(x, self.bot)

    def join_all(self, xs):
        result = self.bot
        for x in xs:
            result = self.join(result, x)
        return result

    def tensor_all(self, xs):
        result = self.top
        for x in xs:
            result = self.tensor(result, x)
        return result

    def apply(self, op, x, y=None):
        if op == "tensor":
            return self.tensor(x, y)
        if op in ("residuum", "implies"):
            return self.residuum(x, y)
        if op == "join":
            return self.join(x, y)
        if op == "meet":
            return self.meet(x, y)
        if op == "biimp":
            return self.biimp(x, y)
        if op == "neg":
            return self.neg(x)
        raise AlgebraError(f"Неизвестная связка: {op}")

    def describe(self):
        return self.kind


class ScalarAlgebra(Algebra):
    """Алгебры со значениями float на линейно упорядоченном носителе."""

    @property
    def bot(self):
        return 0.0

    @property
    def top(self):
        return 1.0

    def join(self, x, y):
        return max(x, y)

    def meet(self, x, y):
        return min(x, y)

    def leq(self, x, y):
        return x <= y + self.epsilon

    def eq(self, x, y):
        return abs(x - y) <= self.epsilon


class UnitIntervalAlgebra(ScalarAlgebra):
    """t-нормы Гёделя, Лукасевича и произведения на [0,1]."""

    def __init__(self, kind, epsilon=None):
        super().__init__(epsilon)
        if kind not in UNIT_INTERVAL_KINDS:
            raise AlgebraError(f"Неизвестный вид алгебры на [0,1]: {kind}")
        self.kind = kind

    def tensor(self, x, y):
        if self.kind == "godel":
            return min(x, y)
        if self.kind == "lukasiewicz":
            return max(0.0, x + y - 1.0)
        return x * y

    def residuum(self, x, y):
        if x <= y + self.epsilon:
            return 1.0
        if self.kind == "godel":
            return y
        if self.kind == "lukasiewicz":
            return min(1.0, 1.0 - x + y)
        return y / x

    def check_value(self, x):
        try:
            v = float(x)
        except (TypeError, ValueError):
            raise AlgebraError(f"Значение {x!r} не является числом")
        if v < -self.epsilon or v > 1.0 + self.epsilon:
            raise AlgebraError(f"Значение {v} вне [0,1]")
        return min(1.0, max(0.0, v))

    def values(self):
        return [float(v) for v in np.linspace(0.0, 1.0, GRID_STEPS)]


class FiniteAlgebra(ScalarAlgebra):
    """
    Конечная цепь значений с табличным или гёделевским умножением.
    Резидуум по умолчанию вычисляется как max{z : x⊗z ≤ y}.
    """

    def __init__(self, kind, carrier, tensor_table=None, residuum_table=None, epsilon=None):
        super().__init__(epsilon)
        self.kind = kind
        values = sorted(float(v) for v in carrier)
        if len(values) < 2:
            raise AlgebraError("Носитель должен содержать не менее двух значений")
        self._carrier = tuple(values)
        self._tensor = None
        self._residuum = None
        if tensor_table is not None:
            self._tensor = {}
            for x in self._carrier:
                for y in self._carrier:
                    self._tensor[(x, y)] = self._lookup(tensor_table, x, y, "tensor")
            self._residuum = {}
            for x in self._carrier:
                for y in self._carrier:
                    if residuum_table is not None:
                        self._residuum[(x, y)] = self._lookup(residuum_table, x, y, "residuum")
                    else:
                        self._residuum[(x, y)] = self._derived_residuum(x, y)

    def _lookup(self, table, x, y, what):
        for key in ((x, y), (y, x)) if what == "tensor" else ((x, y),):
            for (a, b), v in table.items():
                if self.eq(float(a), key[0]) and self.eq(float(b), key[1]):
                    return self.snap(float(v))
        if what == "tensor":
            # единица и ноль по умолчанию
            if self.eq(y, self.top):
                return x
            if self.eq(x, self.top):
                return y
        raise AlgebraError(f"В таблице {what} нет значения для ({x}, {y})")

    def _derived_residuum(self, x, y):
        best = None
        for z in self._carrier:
            if self.leq(self._tensor[(x, z)], y):
                best = z
        return self.bot if best is None else best

    @property
    def carrier(self):
        return self._carrier

    @property
    def bot(self):
        return self._carrier[0]

    @property
    def top(self):
        return self._carrier[-1]

    def snap(self, x):
        for v in self._carrier:
            if abs(v - x) <= self.epsilon:
                return v
        raise AlgebraError(f"Значение {x} не принадлежит носителю {list(self._carrier)}")

    def check_value(self, x):
        try:
            v = float(x)
        except (TypeError, ValueError):
            raise AlgebraError(f"Значение {x!r} не является числом")
        return self.snap(v)

    def tensor(self, x, y):
        if self._tensor is None:
            return min(x, y)
        return self._tensor[(self.snap(x), self.snap(y))]

    def residuum(self, x, y):
        if self._residuum is None:
            return self.top if x <= y + self.epsilon else y
        return self._residuum[(self.snap(x), self.snap(y))]

    def values(self):
        return list(self._carrier)

    def describe(self):
        if self.kind == "chain":
            return f"chain {len(self._carrier)}"
        return self.kind


class ProductAlgebra(Algebra):
    """Декартово произведение алгебр, связки покомпонентно."""

    kind = "product_of"

    def __init__(self, factors, epsilon=None):
        super().__init__(epsilon)
        if not factors:
            raise AlgebraError("Произведение алгебр требует хотя бы один сомножитель")
        self.factors = tuple(factors)

    @property
    def bot(self):
        return tuple(a.bot for a in self.factors)

    @property
    def top(self):
        return tuple(a.top for a in self.factors)

    @property
    def carrier(self):
        if not all(a.is_finite for a in self.factors):
            return None
        return tuple(itertools.product(*(a.carrier for a in self.factors)))

    def _map(self, op, x, y):
        return tuple(a.apply(op, xi, yi) for a, xi, yi in zip(self.factors, x, y))

    def tensor(self, x, y):
        return self._map("tensor", x, y)

    def residuum(self, x, y):
        return self._map("residuum", x, y)

    def join(self, x, y):
        return self._map("join", x, y)

    def meet(self, x, y):
        return self._map("meet", x, y)

    def leq(self, x, y):
        return all(a.leq(xi, yi) for a, xi, yi in zip(self.factors, x, y))

    def eq(self, x, y):
        return all(a.eq(xi, yi) for a, xi, yi in zip(self.factors, x, y))

    def check_value(self, x):
        if not isinstance(x, (tuple, list)) or len(x) != len(self.factors):
            raise AlgebraError(
                f"Значение {x!r} должно быть кортежем из {len(self.factors)} компонент"
            )
        return tuple(a.check_value(xi) for a, xi in zip(self.factors, x))

    def values(self):
        return list(itertools.product(*(a.values() for a in self.factors)))

    def describe(self):
        return "product_of " + " ".join(a.describe() for a in self.factors)


def make_algebra(kind, validate=True, epsilon=None, **params):
    """
    Создает алгебру по виду.

    Args:
        kind (str): boolean | chain | godel | lukasiewicz | product | table | product_of
        validate (bool): Проверять табличные алгебры перед принятием
        epsilon (float): Допуск сравнения
        **params: n для chain; carrier, tensor, residuum для table; factors для product_of

    Returns:
        Algebra: Построенная алгебра

    Raises:
        AlgebraError: при неверных параметрах или нарушении законов
    """
    if kind == "boolean":
        return FiniteAlgebra("boolean", (0.0, 1.0), epsilon=epsilon)
    if kind == "chain":
        n = params.get("n")
        if not isinstance(n, int) or n < 2:
            raise AlgebraError(f"chain(n) требует целое n ≥ 2, получено {n!r}")
        carrier = [k / (n - 1) for k in range(n)]
        return FiniteAlgebra("chain", carrier, epsilon=epsilon)
    if kind in UNIT_INTERVAL_KINDS:
        return UnitIntervalAlgebra(kind, epsilon=epsilon)
    if kind == "table":
        carrier = params.get("carrier")
        tensor = params.get("tensor")
        if not carrier or tensor is None:
            raise AlgebraError("Табличная алгебра требует носитель и таблицу ⊗")
        algebra = FiniteAlgebra("table", carrier, tensor, params.get("residuum"), epsilon=epsilon)
        if validate:
            report = validate_algebra(algebra)
            if not report.ok:
                failed = report.failures()[0]
                raise AlgebraError(
                    f"Табличная алгебра нарушает закон '{failed.law}', свидетель {failed.witness}"
                )
        return algebra
    if kind == "product_of":
        factors = params.get("factors") or []
        return ProductAlgebra(factors, epsilon=epsilon)
    raise AlgebraError(f"Неизвестный вид алгебры: {kind}")


def eval_connective(a, op, x, y=None):
    """
    Вычисляет связку после проверки аргументов.

    Args:
        a (Algebra): Алгебра
        op (str): tensor | residuum | join | meet | biimp | neg
        x: Первый аргумент
        y: Второй аргумент (отсутствует для neg)

    Returns:
        Значение связки
    """
    if op not in CONNECTIVES:
        raise AlgebraError(f"Неизвестная связка: {op}")
    x = a.check_value(x)
    if op == "neg":
        return a.neg(x)
    if y is None:
        raise AlgebraError(f"Связка {op} требует два аргумента")
    return a.apply(op, x, a.check_value(y))


@dataclass
class LawResult:
    law: str
    passed: bool
    witness: tuple = None


@dataclass
class AlgebraReport:
    algebra: str
    laws: list = field(default_factory=list)

    @property
    def ok(self):
        return all(r.passed for r in self.laws)

    def failures(self):
        return [r for r in self.laws if not r.passed]


def _first(candidates):
    for witness in candidates:
        return witness
    return None


def _scalar_laws(a, vals):
    pairs = list(itertools.product(vals, repeat=2))
    triples = list(itertools.product(vals, repeat=3))
    t, r, leq, eq = a.tensor, a.residuum, a.leq, a.eq
    checks = [
        ("top_not_bot", lambda: None if not eq(a.top, a.bot) else (a.top, a.bot)),
        ("commutativity", lambda: _first(
            (x, y) for x, y in pairs if not eq(t(x, y), t(y, x)))),
        ("associativity", lambda: _first(
            (x, y, z) for x, y, z in triples if not eq(t(t(x, y), z), t(x, t(y, z))))),
        ("unit", lambda: _first((x,) for x in vals if not eq(t(x, a.top), x))),
        ("lattice", lambda: _first(
            (x, y) for x, y in pairs
            if not (eq(a.join(x, a.meet(x, y)), x) and eq(a.meet(x, a.join(x, y)), x)
                    and leq(a.bot, x) and leq(x, a.top)))),
        ("monotonicity", lambda: _first(
            (x, x2, y) for x, x2, y in triples
            if leq(x, x2) and not leq(t(x, y), t(x2, y)))),
        ("residuation", lambda: _first(
            (x, y, z) for x, y, z in triples
            if leq(t(x, y), z) != leq(x, r(y, z)))),
        ("order_by_residuum", lambda: _first(
            (x, y) for x, y in pairs if leq(x, y) != eq(r(x, y), a.top))),
    ]
    results = []
    for name, check in checks:
        witness = check()
        results.append(LawResult(name, witness is None, witness))
    return results


def validate_algebra(a):
    """
    Проверяет законы ML-алгебры: полный перебор для конечных носителей,
    сетка 21×21×21 для [0,1]; произведения проверяются по сомножителям.

    Returns:
        AlgebraReport: Результат по каждому закону со свидетелем нарушения
    """
    report = AlgebraReport(a.describe())
    if isinstance(a, ProductAlgebra):
        for j, factor in enumerate(a.factors):
            for law in validate_algebra(factor).laws:
                report.laws.append(LawResult(f"{j}:{law.law}", law.passed, law.witness))
    else:
        report.laws = _scalar_laws(a, a.values())
    for failed in report.failures():
        logger.warning(f"⚠️ Закон '{failed.law}' нарушен в {report.algebra}: {failed.witness}")
    return report


def is_divisible(a):
    """
    Проверяет тождество x⊗(x⇒y) = x∧y.

    Returns:
        bool: True если алгебра делимая
    """
    if isinstance(a, ProductAlgebra):
        return all(is_divisible(f) for f in a.factors)
    vals = a.values()
    holds = all(
        a.eq(a.tensor(x, a.residuum(x, y)), a.meet(x, y))
        for x in vals for y in vals
    )
    if isinstance(a, UnitIntervalAlgebra) and not holds:
        logger.warning(f"⚠️ Выборочная проверка делимости {a.kind} не прошла, "
                       "используется аналитический ответ")
        return True
    return holds


def require_divisible(a, error_cls, what):
    if not is_divisible(a):
        raise error_cls(f"{what}: требуется делимая алгебра, {a.describe()} не делимая")


def _check_index(p, j):
    if not isinstance(p, ProductAlgebra):
        raise AlgebraError("Проекция определена только для произведения алгебр")
    if not 0 <= j < len(p.factors):
        raise AlgebraError(f"Индекс сомножителя {j} вне диапазона 0..{len(p.factors) - 1}")


def product_project(p, j, v):
    _check_index(p, j)
    return p.check_value(v)[j]


def product_upper(p, j, x):
    """Вложение с заполнением ⊤: (⊤,…,x,…,⊤)."""
    _check_index(p, j)
    x = p.factors[j].check_value(x)
    return tuple(x if i == j else f.top for i, f in enumerate(p.factors))


def product_lower(p, j, x):
    """Вложение с заполнением ⊥: (⊥,…,x,…,⊥)."""
    _check_index(p, j)
    x = p.factors[j].check_value(x)
    return tuple(x if i == j else f.bot for i, f in enumerate(p.factors))
