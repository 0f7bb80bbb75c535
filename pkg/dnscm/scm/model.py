# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Structural causal models and the samples they produce."""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from dnscm.scm.mechanisms import Mechanism
from dnscm.scm.noise import NoiseSpec


@dataclass(frozen=True)
class StructuralEquation:
    """
    Structural equation ``target = mechanism(parents, noise)``.

    Attributes:
        target: Name of the endogenous variable
        parents: Ordered parent variable names
        mechanism: Function of (parent values, noise value)
        noise: Name of the exogenous noise term (default ``U_<target>``)
    """

    target: str
    parents: Tuple[str, ...]
    mechanism: Mechanism
    noise: str = ""

    def __post_init__(self) -> None:
        if not self.target:
            raise ValueError("Equation target must be non-empty")
        object.__setattr__(self, "parents", tuple(self.parents))
        if self.target in self.parents:
            raise ValueError(f"Variable {self.target} appears as its own parent")
        if len(set(self.parents)) != len(self.parents):
            raise ValueError(f"Duplicate parents for {self.target}: {list(self.parents)}")
        if not self.noise:
            object.__setattr__(self, "noise", f"U_{self.target}")


class Scm:
    """
    Structural causal model over named variables.

    One equation and one noise per variable; the induced parent graph must be
    acyclic. Instances are immutable: interventions return new models.
    """

    def __init__(self, equations: Sequence[StructuralEquation], noises: Sequence[NoiseSpec]):
        """
        Build and validate a model.

        Args:
            equations: One structural equation per variable
            noises: One noise spec per equation, matched by ``equation.noise``

        Raises:
            ValueError: If variables or noises are duplicated or missing, a
                parent is undeclared, or the graph has a cycle
        """
        self._equations: Dict[str, StructuralEquation] = {}
        for equation in equations:
            if equation.target in self._equations:
                raise ValueError(f"Duplicate equation for variable {equation.target}")
            self._equations[equation.target] = equation

        self._noises: Dict[str, NoiseSpec] = {}
        for spec in noises:
            if spec.name in self._noises:
                raise ValueError(f"Duplicate noise {spec.name}")
            self._noises[spec.name] = spec

        used: Dict[str, str] = {}
        for equation in self._equations.values():
            if equation.noise not in self._noises:
                raise ValueError(
                    f"Variable {equation.target} uses undeclared noise {equation.noise}"
                )
            if equation.noise in used:
                raise ValueError(
                    f"Noise {equation.noise} is shared by {used[equation.noise]} and {equation.target}"
                )
            used[equation.noise] = equation.target
            for parent in equation.parents:
                if parent not in self._equations:
                    raise ValueError(
                        f"Variable {equation.target} has undeclared parent {parent}"
                    )
        unused = sorted(set(self._noises) - set(used))
        if unused:
            raise ValueError(f"Noises without a variable: {', '.join(unused)}")

        graph = nx.DiGraph()
        graph.add_nodes_from(self._equations)
        for equation in self._equations.values():
            graph.add_edges_from((parent, equation.target) for parent in equation.parents)
        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            raise ValueError(f"Structural equations are cyclic: {cycle}")
        position = {name: i for i, name in enumerate(self._equations)}
        self._graph = graph
        self._order: Tuple[str, ...] = tuple(
            nx.lexicographical_topological_sort(graph, key=lambda name: position[name])
        )

    @property
    def variables(self) -> Tuple[str, ...]:
        """Variables in declaration order."""
        return tuple(self._equations)

    @property
    def order(self) -> Tuple[str, ...]:
        """Topological order (ties broken by declaration order)."""
        return self._order

    @property
    def equations(self) -> Tuple[StructuralEquation, ...]:
        return tuple(self._equations.values())

    @property
    def noises(self) -> Tuple[NoiseSpec, ...]:
        return tuple(self._noises[self._equations[v].noise] for v in self._equations)

    @property
    def noise_names(self) -> Tuple[str, ...]:
        return tuple(spec.name for spec in self.noises)

    @property
    def graph(self) -> nx.DiGraph:
        """A copy of the causal graph."""
        return self._graph.copy()

    def equation(self, variable: str) -> StructuralEquation:
        self.require_variable(variable)
        return self._equations[variable]

    def noise_for(self, variable: str) -> NoiseSpec:
        return self._noises[self.equation(variable).noise]

    def require_variable(self, variable: str) -> None:
        if variable not in self._equations:
            raise ValueError(
                f"Unknown variable: {variable}. Variables: {', '.join(self._equations)}"
            )

    def descendants(self, variable: str) -> Set[str]:
        """Variables strictly downstream of ``variable``."""
        self.require_variable(variable)
        return set(nx.descendants(self._graph, variable))

    def ancestors(self, variable: str) -> Set[str]:
        """Variables strictly upstream of ``variable``."""
        self.require_variable(variable)
        return set(nx.ancestors(self._graph, variable))

    def replace(self, equation: StructuralEquation, noise: NoiseSpec) -> "Scm":
        """
        Return a copy with one variable's equation and noise replaced.

        Args:
            equation: New equation (its target must already exist)
            noise: Noise spec for the new equation

        Returns:
            New Scm; this instance is unchanged
        """
        self.require_variable(equation.target)
        old_noise = self._equations[equation.target].noise
        equations = [
            equation if name == equation.target else existing
            for name, existing in self._equations.items()
        ]
        noises = [spec for name, spec in self._noises.items() if name != old_noise]
        noises.append(noise)
        return Scm(equations, noises)

    def __repr__(self) -> str:
        parts = []
        for name in self._order:
            equation = self._equations[name]
            parents = ", ".join(equation.parents)
            parts.append(f"{name} = f({parents}{', ' if parents else ''}{equation.noise})")
        return f"Scm({'; '.join(parts)})"


def _frozen_columns(columns: Mapping[str, Iterable[float]], n: Optional[int]) -> Dict[str, np.ndarray]:
    frozen: Dict[str, np.ndarray] = {}
    for name, column in columns.items():
        array = np.array(column, dtype=float)
        if array.ndim != 1:
            raise ValueError(f"Column {name} must be one-dimensional")
        if n is not None and array.shape[0] != n:
            raise ValueError(f"Column {name} has {array.shape[0]} values, expected {n}")
        array.flags.writeable = False
        frozen[name] = array
    return frozen


@dataclass(frozen=True)
class Sample:
    """
    Values of every variable for ``n`` units.

    Attributes:
        n: Unit count
        values: Variable name -> value array of length n
        noise: Noise name -> realized noise array, present only for samples
            generated by this package
    """

    n: int
    values: Dict[str, np.ndarray]
    noise: Optional[Dict[str, np.ndarray]] = field(default=None)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"A sample needs at least one unit, got n={self.n}")
        object.__setattr__(self, "values", _frozen_columns(self.values, self.n))
        if self.noise is not None:
            object.__setattr__(self, "noise", _frozen_columns(self.noise, self.n))

    @classmethod
    def from_records(cls, records: Sequence[Mapping[str, float]]) -> "Sample":
        """
        Build a sample from per-unit dictionaries.

        Raises:
            ValueError: If the records are empty or assign different variables
        """
        if not records:
            raise ValueError("A sample needs at least one unit")
        names = list(records[0])
        for i, record in enumerate(records):
            if set(record) != set(names):
                raise ValueError(f"Unit {i} assigns {sorted(record)}, expected {sorted(names)}")
        return cls(
            n=len(records),
            values={name: [float(record[name]) for record in records] for name in names},
        )

    def __getitem__(self, variable: str) -> np.ndarray:
        if variable not in self.values:
            raise ValueError(f"Unknown variable: {variable}. Observed: {', '.join(self.values)}")
        return self.values[variable]

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(self.values)

    def unit(self, i: int) -> Dict[str, float]:
        """Values of unit ``i`` (0-based)."""
        return {name: float(column[i]) for name, column in self.values.items()}

    def to_records(self) -> List[Dict[str, float]]:
        return [self.unit(i) for i in range(self.n)]

    def require_variables(self, variables: Iterable[str]) -> None:
        missing = [v for v in variables if v not in self.values]
        if missing:
            raise ValueError(f"Sample does not observe: {', '.join(missing)}")


@dataclass(frozen=True)
class NoisePosterior:
    """Point posterior of every noise term, one value per unit."""

    values: Dict[str, np.ndarray]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _frozen_columns(self.values, None))

    def __getitem__(self, noise: str) -> np.ndarray:
        return self.values[noise]

    def __contains__(self, noise: object) -> bool:
        return noise in self.values

    def unit(self, i: int) -> Dict[str, float]:
        return {name: float(column[i]) for name, column in self.values.items()}
