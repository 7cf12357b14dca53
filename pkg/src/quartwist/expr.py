"""Tiny arithmetic-expression evaluator for the shipped data tables.

Expressions use ``^`` for powers and names bound in an environment
(TowerElems, Forms, rationals).  Only + - * / ^, unary minus, integer
literals, names and a whitelisted set of functions are accepted.
"""

import ast

from .exactfield import rational


class ExprError(ValueError):
    pass


def _parse(src):
    try:
        return ast.parse(src.replace("^", "**"), mode="eval").body
    except SyntaxError as e:
        raise ExprError("cannot parse %r: %s" % (src, e))


def evaluate(src, env, funcs=None):
    funcs = funcs or {}
    node = _parse(src) if isinstance(src, str) else src

    def ev(n):
        if isinstance(n, ast.Constant):
            if isinstance(n.value, int) and not isinstance(n.value, bool):
                return rational(n.value)
            raise ExprError("only integer literals are allowed")
        if isinstance(n, ast.Name):
            if n.id not in env:
                raise ExprError("unbound name %r" % n.id)
            return env[n.id]
        if isinstance(n, ast.UnaryOp):
            v = ev(n.operand)
            if isinstance(n.op, ast.USub):
                return -v
            if isinstance(n.op, ast.UAdd):
                return v
        if isinstance(n, ast.BinOp):
            a = ev(n.left)
            if isinstance(n.op, ast.Pow):
                e = n.right
                neg = False
                if isinstance(e, ast.UnaryOp) and isinstance(e.op, ast.USub):
                    neg, e = True, e.operand
                if not (isinstance(e, ast.Constant) and isinstance(e.value, int)):
                    raise ExprError("exponents must be integer literals")
                k = -e.value if neg else e.value
                if k < 0:
                    return (1 / a) ** (-k)
                return a ** k
            b = ev(n.right)
            if isinstance(n.op, ast.Add):
                return a + b
            if isinstance(n.op, ast.Sub):
                return a - b
            if isinstance(n.op, ast.Mult):
                return a * b
            if isinstance(n.op, ast.Div):
                return a / b
        if isinstance(n, ast.Call) and isinstance(n.func, ast.Name) and n.func.id in funcs:
            return funcs[n.func.id](*[ev(a) for a in n.args])
        raise ExprError("unsupported syntax: %s" % ast.dump(n))

    return ev(node)


def names(src):
    """Free names of an expression (function names excluded)."""
    node = _parse(src)
    calls = {id(c.func) for c in ast.walk(node) if isinstance(c, ast.Call)}
    return sorted({n.id for n in ast.walk(node) if isinstance(n, ast.Name) and id(n) not in calls})
