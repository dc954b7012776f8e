"""Parsing of exact scalar and sigma-polynomial text.

The accepted grammar is ordinary arithmetic over integers, ``i``, the variable
``z`` and the sign symbol ``s`` (standing for (-1)^s), for example
``"3/4-2/5i"``, ``"-z^2/3 + 1"`` or ``"z + s*(1/2 - z)"``.  ``sqrt(x)`` is
allowed once per expression family: it yields a Gaussian-rational root when
one exists and otherwise opens the quadratic extension sqrt(x).

Python's own expression parser does the tokenizing; the tree is walked with a
strict whitelist, so nothing is ever executed.
"""

from __future__ import annotations

import ast
from typing import Optional

from .errors import ParseError
from .scalar import I, ExactScalar, Extension, root_of


def _prepare(text: str) -> tuple[str, list[int]]:
    """Rewrite ``^`` as ``**`` and ``5i``/``3z`` as ``5*i``/``3*z``.

    Returns the rewritten text and, for each of its characters, the offset of
    the character of ``text`` it came from.
    """
    out: list[str] = []
    where: list[int] = []
    n = len(text)
    for pos, ch in enumerate(text):
        if ch == "^":
            out.append("**")
            where.extend([pos, pos])
            continue
        if ch == "−":
            ch = "-"
        out.append(ch)
        where.append(pos)
        if ch.isdigit():
            k = pos + 1
            while k < n and text[k] == " ":
                k += 1
            if (k < n and text[k] in "izs"
                    and (k + 1 >= n or not (text[k + 1].isalnum() or text[k + 1] == "_"))):
                out.append("*")
                where.append(pos)
    return "".join(out), where


class _Evaluator:
    def __init__(self, text, where, allow_z, allow_s, context, ext):
        self.text = text
        self.where = where
        self.allow_z = allow_z
        self.allow_s = allow_s
        self.context = context
        self.ext = ext

    def fail(self, message: str, node: Optional[ast.AST] = None):
        pos = None
        if node is not None and hasattr(node, "col_offset"):
            off = node.col_offset
            pos = self.where[off] if off < len(self.where) else len(self.text)
        raise ParseError(message, self.text, pos)

    def poly(self, even, odd=()):
        from .sigma_ring import SigmaPoly

        return SigmaPoly(even, odd, self.context)

    def visit(self, node):
        if isinstance(node, ast.Expression):
            return self.visit(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                self.fail("only integer literals are allowed", node)
            return ExactScalar(node.value)
        if isinstance(node, ast.Name):
            if node.id == "i":
                return I
            if node.id == "z" and self.allow_z:
                return self.poly([0, 1])
            if node.id in ("s", "sigma") and self.allow_s:
                return self.poly([], [1])
            self.fail(f"unknown name {node.id!r}", node)
        if isinstance(node, ast.UnaryOp):
            val = self.visit(node.operand)
            if isinstance(node.op, ast.USub):
                return -val
            if isinstance(node.op, ast.UAdd):
                return val
            self.fail("unsupported unary operator", node)
        if isinstance(node, ast.BinOp):
            left = self.visit(node.left)
            if isinstance(node.op, ast.Pow):
                k = self.visit(node.right)
                if not (isinstance(k, ExactScalar) and k.is_rational()
                        and k.re.denominator == 1 and k.re >= 0):
                    self.fail("exponent must be a non-negative integer", node.right)
                return left ** int(k.re)
            right = self.visit(node.right)
            try:
                if isinstance(node.op, ast.Add):
                    return left + right
                if isinstance(node.op, ast.Sub):
                    return left - right
                if isinstance(node.op, ast.Mult):
                    return left * right
                if isinstance(node.op, ast.Div):
                    if not isinstance(right, ExactScalar):
                        self.fail("division is only allowed by scalars", node.right)
                    return left / right
            except ZeroDivisionError:
                self.fail("division by zero", node)
            self.fail("unsupported operator", node)
        if isinstance(node, ast.Call):
            if not (isinstance(node.func, ast.Name) and node.func.id == "sqrt"
                    and len(node.args) == 1 and not node.keywords):
                self.fail("only sqrt(x) calls are allowed", node)
            arg = self.visit(node.args[0])
            if not isinstance(arg, ExactScalar) or arg.has_surd:
                self.fail("sqrt needs a base-field scalar argument", node)
            root = root_of(arg, self.ext)
            if root.ext is not None:
                self.ext = root.ext
            return root
        self.fail(f"unsupported syntax {type(node).__name__}", node)


def evaluate(text: str, *, allow_z: bool = True, allow_s: bool = True,
             context=None, ext: Optional[Extension] = None):
    """Evaluate ``text`` to an :class:`ExactScalar` or a ``SigmaPoly``."""
    if not text or not text.strip():
        raise ParseError("empty expression", text, 0)
    lead = len(text) - len(text.lstrip())
    prepared, where = _prepare(text.strip())
    where = [w + lead for w in where]
    try:
        tree = ast.parse(prepared, mode="eval")
    except SyntaxError as exc:
        off = (exc.offset or 1) - 1
        pos = where[off] if 0 <= off < len(where) else len(text)
        raise ParseError("syntax error", text, pos) from None
    return _Evaluator(text, where, allow_z, allow_s, context, ext).visit(tree)
