"""
Сеточная диаграмма сложения с гауссовыми подобиями
"""

import logging

import numpy as np

from .diagram import Arrow, MultiDiagram
from .relation import OmegaSet, MultiMorphism, Port, SOURCE, TARGET, crisp_omega_set
from .semiotic import Semiotic

logger = logging.getLogger(__name__)


def grid_points(lo, hi, step):
    """Узлы сетки [lo, hi] с шагом step (включая концы)."""
    count = int(round((hi - lo) / step)) + 1
    return np.round(lo + step * np.arange(count), 10)


def element_id(value):
    return f"{float(value):g}"


def gaussian_oset(sign, points, center, algebra, name=None):
    """α(a,b) = exp(-(a-c)²/2 - (b-c)²/2); протяженность exp(-(a-c)²)."""
    offsets = (points - center) ** 2 / 2.0
    matrix = np.exp(-(offsets[:, None] + offsets[None, :]))
    support = [element_id(p) for p in points]
    sim = {
        (support[i], support[j]): float(matrix[i, j])
        for i in range(len(support)) for j in range(len(support))
        if matrix[i, j] > 0.0
    }
    return OmegaSet(sign, support, algebra, sim, name=name or sign)


def sum_morphism(name, left, right, out, out_points, algebra, scale=1.0):
    """⊕(x,y,w) = scale · exp(-(w-x-y)²/2) на сетке."""
    xs = np.array([float(e) for e in left.support])
    ys = np.array([float(e) for e in right.support])
    sums = xs[:, None] + ys[None, :]
    table = {}
    for k, w in enumerate(out_points):
        values = scale * np.exp(-((w - sums) ** 2) / 2.0)
        for i, x in enumerate(left.support):
            for j, y in enumerate(right.support):
                if values[i, j] > 0.0:
                    table[(x, y, out.support[k])] = float(values[i, j])
    ports = [Port("l", SOURCE, left), Port("r", SOURCE, right), Port("w", TARGET, out)]
    return MultiMorphism(algebra, ports, table, name=name)


def gaussian_sum_diagram(algebra, x0=0.5, x1=-1.0, lo=-3.0, hi=3.0, step=0.5,
                         w_lo=None, w_hi=None, scale=1.0):
    """
    Диаграмма с вершинами x, y (гауссовы подобия с центрами x0, x1) и четкой
    сеткой w; стрелки ⊕(x,y→w) и ⊕(y,x→w), первая умножена на scale.
    Источники диаграммы - (x, y).

    Returns:
        MultiDiagram: Сеточная диаграмма
    """
    points = grid_points(lo, hi, step)
    out_points = grid_points(lo if w_lo is None else w_lo, hi if w_hi is None else w_hi, step)
    # x и y интерпретируют один знак, поэтому центры хранятся в разных Ω-множествах
    alpha0 = gaussian_oset("R", points, x0, algebra, name="R_x")
    alpha1 = gaussian_oset("R", points, x1, algebra, name="R_y")
    omega = crisp_omega_set("R", [element_id(p) for p in out_points], algebra, name="R_w")
    plus_xy = sum_morphism("plus_xy", alpha0, alpha1, omega, out_points, algebra, scale)
    plus_yx = sum_morphism("plus_yx", alpha1, alpha0, omega, out_points, algebra)
    logger.debug(f"Сеточная диаграмма: {len(points)}×{len(points)}×{len(out_points)} узлов")
    return MultiDiagram(
        algebra,
        {"x": alpha0, "y": alpha1, "w": omega},
        [Arrow("p", plus_xy, ("x", "y"), ("w",)), Arrow("q", plus_yx, ("y", "x"), ("w",))],
        ("x", "y"),
        name="gauss",
    )


def sum_in_range(lo, hi):
    """Ограничение на пары источников: x + y ∈ [lo, hi]."""
    def restrict(assignment):
        total = float(assignment["x"]) + float(assignment["y"])
        return lo - 1e-12 <= total <= hi + 1e-12
    return restrict


def gaussian_semiotic(algebra, algebra_name="P", **params):
    """Семиотика с одной сеточной диаграммой (для вывода в .sem)."""
    diagram = gaussian_sum_diagram(algebra, **params)
    semiotic = Semiotic(diagram.name, algebra, algebra_name=algebra_name,
                        algebras={algebra_name: algebra})
    semiotic.ontology.add("R")
    for oset in diagram.vertices.values():
        semiotic.osets[oset.name] = oset
    for arrow in diagram.arrows:
        semiotic.comps[arrow.morphism.name] = arrow.morphism
    semiotic.diagrams[diagram.name] = diagram
    return semiotic
