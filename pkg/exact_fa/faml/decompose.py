"""Sum/saturation decomposition tree of the likelihood ideal."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

from ..algebra.groebner import (
    GroebnerBasis,
    Ideal,
    branch_budget,
    buchberger,
    fglm,
    ideal_sum,
    is_zero_dimensional,
    radical_basis,
    saturate,
)
from ..algebra.polyring import GREVLEX, LEX, MonomialOrder, Polynomial
from ..config import DEFAULT_COMPLEXITY_THRESHOLD
from ..errors import ResourceExceeded
from ..pool import WorkerPool
from .ideal import extra_splitters, psi_polynomials
from .problem import FactorProblem

LOGGER = logging.getLogger(__name__)

NodeStatus = Literal["ZeroDim", "PositiveDim", "Empty", "Budget"]
Splitter = Tuple[str, Polynomial]


@dataclass(frozen=True)
class DecompositionNode:
    """A leaf of the tree.

    Character ``c`` of ``label`` records branch ``c`` of the matching splitter: ``0`` adds
    the splitter to the ideal, ``1`` saturates by it.
    """

    label: str
    ideal: Ideal
    gb_grevlex: Optional[GroebnerBasis]
    status: NodeStatus
    splitters: Tuple[str, ...] = ()
    diagnostics: Dict[str, Any] = field(default_factory=dict, compare=False)

    def lex_basis(self, order: MonomialOrder = LEX, **budget: Any) -> GroebnerBasis:
        if self.gb_grevlex is None:
            raise ValueError(f"leaf {self.label} has no Groebner basis ({self.status})")
        return fglm(self.gb_grevlex, order, **budget)

    def summary(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"label": self.label, "status": self.status, "splitters": list(self.splitters)}
        if self.gb_grevlex is not None:
            data["basis_size"] = len(self.gb_grevlex.elements)
        if self.diagnostics:
            data["diagnostics"] = {key: str(value) for key, value in self.diagnostics.items()}
        return data


@dataclass(frozen=True)
class _NodeJob:
    label: str
    ideal: Ideal
    splitters: Tuple[Splitter, ...]
    extras: Tuple[Splitter, ...]
    applied: Tuple[str, ...]
    threshold: int
    budget: Tuple[Tuple[str, Any], ...]


@dataclass
class _NodeOutcome:
    leaves: List[DecompositionNode] = field(default_factory=list)
    children: List[_NodeJob] = field(default_factory=list)


def _empty_leaves(job: _NodeJob, basis: GroebnerBasis) -> List[DecompositionNode]:
    """An empty node stands for every leaf below it on the main splitters.

    An empty root is reported as a single leaf.
    """

    if not job.label:
        return [DecompositionNode("", job.ideal, basis, "Empty", job.applied)]
    names = tuple(name for name, _ in job.splitters)
    leaves = []
    for suffix in product("01", repeat=len(job.splitters)):
        leaves.append(
            DecompositionNode(job.label + "".join(suffix), job.ideal, basis, "Empty", job.applied + names)
        )
    return leaves


def _process(job: _NodeJob) -> _NodeOutcome:
    # one deadline per node, fixed when the worker picks the node up
    budget = branch_budget(dict(job.budget))
    outcome = _NodeOutcome()
    try:
        basis = buchberger(job.ideal, GREVLEX, **budget)
        if basis.is_unit:
            outcome.leaves.extend(_empty_leaves(job, basis))
            return outcome

        if job.splitters:
            (name, h), rest, extras = job.splitters[0], job.splitters[1:], job.extras
        elif job.extras and basis.max_leading_degree() > job.threshold:
            (name, h), rest, extras = job.extras[0], (), job.extras[1:]
            LOGGER.debug("Node %s: leading degree %d, splitting on %s", job.label, basis.max_leading_degree(), name)
        else:
            if is_zero_dimensional(basis):
                radical = radical_basis(basis, **budget)
                status: NodeStatus = "Empty" if radical.is_unit else "ZeroDim"
                outcome.leaves.append(DecompositionNode(job.label, job.ideal, radical, status, job.applied))
            else:
                outcome.leaves.append(DecompositionNode(job.label, job.ideal, basis, "PositiveDim", job.applied))
            return outcome

        splitter = Ideal(basis.nvars, (h,))
        applied = job.applied + (name,)
        summed = ideal_sum(basis.ideal(), splitter)
        saturated = saturate(basis.ideal(), h, **budget)
        for suffix, child in (("0", summed), ("1", saturated)):
            outcome.children.append(
                _NodeJob(job.label + suffix, child, rest, extras, applied, job.threshold, job.budget)
            )
    except ResourceExceeded as exc:
        LOGGER.warning("Node %s exceeded its budget: %s", job.label or "<root>", exc)
        outcome.leaves.append(DecompositionNode(job.label, job.ideal, None, "Budget", job.applied, dict(exc.diagnostics)))
    return outcome


def decompose_ideal(
    ideal: Ideal,
    splitters: Sequence[Splitter],
    *,
    extras: Sequence[Splitter] = (),
    complexity_threshold: int = DEFAULT_COMPLEXITY_THRESHOLD,
    pool: Optional[WorkerPool] = None,
    **budget: Any,
) -> List[DecompositionNode]:
    """Split ``ideal`` on every splitter in turn; the leaf varieties cover ``V(ideal)``.

    ``extras`` are only used below leaves whose grevlex basis has a leading monomial of
    degree above ``complexity_threshold``.
    ``budget`` takes the keywords of :func:`buchberger` and applies to each node; a node
    that exhausts it becomes a ``Budget`` leaf and the other branches carry on.
    """

    pool = pool or WorkerPool()
    frontier = [
        _NodeJob("", ideal, tuple(splitters), tuple(extras), (), complexity_threshold, tuple(sorted(budget.items())))
    ]
    leaves: List[DecompositionNode] = []
    depth = 0
    while frontier:
        LOGGER.debug("Decomposition depth %d: %d nodes", depth, len(frontier))
        next_frontier: List[_NodeJob] = []
        for job, result in zip(frontier, pool.run(_process, frontier)):
            if result.error is not None:
                LOGGER.error("Node %s failed: %s", job.label or "<root>", result.error)
                raise result.error
            outcome = result.value
            assert outcome is not None
            leaves.extend(outcome.leaves)
            next_frontier.extend(outcome.children)
        frontier = next_frontier
        depth += 1
    leaves.sort(key=lambda node: node.label)
    for node in leaves:
        LOGGER.info("Leaf %s: %s", node.label or "<root>", node.status)
    return leaves


def problem_splitters(prob: FactorProblem) -> Tuple[List[Splitter], List[Splitter]]:
    """The unique-variance splitters and, for ``k >= 2``, the extra ones."""

    main = [(f"psi{i + 1}", poly) for i, poly in enumerate(psi_polynomials(prob))]
    return main, extra_splitters(prob)


def decompose(
    ideal: Ideal,
    prob: FactorProblem,
    *,
    complexity_threshold: int = DEFAULT_COMPLEXITY_THRESHOLD,
    pool: Optional[WorkerPool] = None,
    **budget: Any,
) -> List[DecompositionNode]:
    main, extras = problem_splitters(prob)
    return decompose_ideal(
        ideal,
        main,
        extras=extras,
        complexity_threshold=complexity_threshold,
        pool=pool,
        **budget,
    )


__all__ = [
    "DecompositionNode",
    "NodeStatus",
    "decompose",
    "decompose_ideal",
    "problem_splitters",
]
