import typing

import numpy as np

from ..error import ShapeMismatch


BackwardFn = typing.Callable[[np.ndarray], typing.Sequence[typing.Optional[np.ndarray]]]


class Tensor:
    """
    Dense real array taking part in reverse-mode differentiation.

    Operators record their parents and a backward closure only when one of
    the inputs requires a gradient.
    """

    def __init__(
        self,
        data: typing.Any,
        requires_grad: bool = False,
        parents: typing.Sequence["Tensor"] = (),
        backward: typing.Optional[BackwardFn] = None,
        op: str = "leaf",
    ) -> None:
        array = np.asarray(data)
        if not np.issubdtype(array.dtype, np.floating):
            array = array.astype(np.float32)

        self.data: np.ndarray = array
        self.grad: typing.Optional[np.ndarray] = None
        self.requires_grad = requires_grad
        self.parents = tuple(parents)
        self.backward_fn = backward
        self.op = op

    @property
    def shape(self) -> typing.Tuple[int, ...]:
        return tuple(self.data.shape)

    @property
    def dtype(self) -> np.dtype:  # type: ignore
        return self.data.dtype

    def __repr__(self) -> str:
        return (
            f"Tensor(shape={self.shape}, op={self.op}, "
            f"requires_grad={self.requires_grad})"
        )

    def zero_grad(self) -> None:
        self.grad = None

    def detach(self) -> "Tensor":
        return Tensor(self.data)

    def item(self) -> float:
        return float(self.data.reshape(-1)[0])

    def backward(self, grad: typing.Optional[np.ndarray] = None) -> None:
        Graph.from_output(self).backward(grad)

    def __add__(self, other: "Tensor") -> "Tensor":
        return add(self, other)

    def __mul__(self, other: float) -> "Tensor":
        return scale(self, other)

    __rmul__ = __mul__

    def sum(self) -> "Tensor":
        return total(self)

    def mean(self) -> "Tensor":
        return scale(total(self), 1.0 / self.data.size)


def storage_dtype(*tensors: Tensor) -> np.dtype:  # type: ignore
    return np.result_type(*[t.data.dtype for t in tensors])


def result(
    data: np.ndarray,
    parents: typing.Sequence[Tensor],
    backward: BackwardFn,
    op: str,
) -> Tensor:
    dtype = storage_dtype(*parents)
    if not any(parent.requires_grad for parent in parents):
        return Tensor(data.astype(dtype, copy=False), op=op)

    return Tensor(
        data.astype(dtype, copy=False),
        requires_grad=True,
        parents=parents,
        backward=backward,
        op=op,
    )


class Graph:
    """
    Topologically ordered record of the operations reaching an output.
    """

    def __init__(self, nodes: typing.Sequence[Tensor]) -> None:
        self.nodes = list(nodes)

    @classmethod
    def from_output(cls, output: Tensor) -> "Graph":
        order: typing.List[Tensor] = []
        visited: typing.Set[int] = set()

        stack: typing.List[typing.Tuple[Tensor, bool]] = [(output, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue

            if id(node) in visited:
                continue
            visited.add(id(node))

            stack.append((node, True))
            for parent in node.parents:
                if id(parent) not in visited and parent.requires_grad:
                    stack.append((parent, False))

        return cls(order)

    def backward(self, grad: typing.Optional[np.ndarray] = None) -> None:
        if not self.nodes:
            return

        output = self.nodes[-1]
        if grad is None:
            if output.data.size != 1:
                raise ShapeMismatch("implicit gradient needs a scalar output")
            grad = np.ones_like(output.data, dtype=np.float64)

        if tuple(np.shape(grad)) != output.shape:
            raise ShapeMismatch(f"gradient shape {np.shape(grad)} != {output.shape}")

        grads: typing.Dict[int, np.ndarray] = {id(output): np.asarray(grad, np.float64)}
        for node in reversed(self.nodes):
            node_grad = grads.pop(id(node), None)
            if node_grad is None:
                continue

            if node.backward_fn is None:
                if node.requires_grad:
                    accumulated = node_grad.astype(node.data.dtype)
                    if node.grad is not None:
                        accumulated = node.grad + accumulated
                    node.grad = accumulated
                continue

            for parent, parent_grad in zip(node.parents, node.backward_fn(node_grad)):
                if parent_grad is None or not parent.requires_grad:
                    continue

                if id(parent) in grads:
                    grads[id(parent)] = grads[id(parent)] + parent_grad
                else:
                    grads[id(parent)] = parent_grad


def add(a: Tensor, b: Tensor) -> Tensor:
    if a.shape != b.shape:
        raise ShapeMismatch(f"add of {a.shape} and {b.shape}")

    def backward(g: np.ndarray) -> typing.Sequence[typing.Optional[np.ndarray]]:
        return [g, g]

    return result(a.data.astype(np.float64) + b.data, [a, b], backward, "add")


def scale(a: Tensor, factor: float) -> Tensor:
    def backward(g: np.ndarray) -> typing.Sequence[typing.Optional[np.ndarray]]:
        return [g * factor]

    return result(a.data.astype(np.float64) * factor, [a], backward, "scale")


def total(a: Tensor) -> Tensor:
    shape = a.shape

    def backward(g: np.ndarray) -> typing.Sequence[typing.Optional[np.ndarray]]:
        return [np.broadcast_to(g.reshape(()), shape).astype(np.float64)]

    return result(
        np.asarray(a.data.astype(np.float64).sum()).reshape(()), [a], backward, "sum"
    )
