"""Expression grammar for declarative manifold files.

Expressions are arithmetic (``+ - * / **``) over numeric literals, the chart
coordinates ``u1..u4``, the constant ``pi``, previously defined names and the
elementary functions of :mod:`hhgeom.jet`.  Strings are parsed with :mod:`ast`,
checked against that whitelist, and compiled once.
"""

import ast
import math

from . import jet

COORDS = ("u1", "u2", "u3", "u4")
CONSTANTS = {"pi": math.pi}

_ALLOWED_NODES = (
    ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant, ast.Name, ast.Load, ast.Call,
    ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd,
)
_COMPARE_NODES = (ast.Compare, ast.Gt, ast.GtE, ast.Lt, ast.LtE, ast.NotEq)


class ExpressionError(ValueError):
    pass


class Expr:
    """A compiled component expression."""

    def __init__(self, source, names=(), allow_compare=False):
        self.source = str(source).strip()
        allowed = _ALLOWED_NODES + (_COMPARE_NODES if allow_compare else ())
        try:
            tree = ast.parse(self.source, mode="eval")
        except SyntaxError as exc:
            raise ExpressionError(f"cannot parse {self.source!r}: {exc.msg}") from None
        known = set(COORDS) | set(CONSTANTS) | set(names)
        for node in ast.walk(tree):
            if not isinstance(node, allowed):
                raise ExpressionError(
                    f"{type(node).__name__} not allowed in expression {self.source!r}"
                )
            if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float)):
                raise ExpressionError(f"non-numeric literal in {self.source!r}")
            if isinstance(node, ast.Call):
                if not isinstance(node.func, ast.Name) or node.func.id not in jet.ELEMENTARY:
                    raise ExpressionError(f"unknown function in {self.source!r}")
                if node.keywords or len(node.args) != 1:
                    raise ExpressionError(f"functions take one argument: {self.source!r}")
            elif isinstance(node, ast.Name):
                if node.id not in known and node.id not in jet.ELEMENTARY:
                    raise ExpressionError(f"unknown name {node.id!r} in {self.source!r}")
        self._code = compile(tree, "<expr>", "eval")

    def __call__(self, env):
        return eval(self._code, {"__builtins__": {}}, env)

    def __repr__(self):
        return f"Expr({self.source!r})"


class ExprSystem:
    """Ordered definitions plus the coordinate environment they are evaluated in.

    ``defs`` is a sequence of ``(name, source)`` pairs; later definitions may
    use earlier ones.
    """

    def __init__(self, defs=()):
        self.defs = []
        names = []
        for name, src in (defs.items() if isinstance(defs, dict) else defs):
            if not name.isidentifier() or name in COORDS or name in jet.ELEMENTARY:
                raise ExpressionError(f"invalid definition name {name!r}")
            self.defs.append((name, Expr(src, names)))
            names.append(name)
        self.names = tuple(names)

    def compile(self, source, allow_compare=False):
        return Expr(source, self.names, allow_compare)

    def environment(self, u):
        """Namespace for coordinates ``u`` (four jets or four floats/arrays)."""
        env = dict(jet.ELEMENTARY)
        env.update(CONSTANTS)
        env.update(zip(COORDS, u))
        for name, ex in self.defs:
            env[name] = ex(env)
        return env
