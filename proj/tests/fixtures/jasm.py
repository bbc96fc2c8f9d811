# Copyright 2026 The jmut Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Minimal JVM class-file assembler used to build test fixtures.

Written independently of the C++ reader/writer so fixtures can act as an
oracle for them. Stack map frames are never inferred here: methods that
need them declare full frames explicitly with Code.frame().
"""

import struct

PUBLIC, PRIVATE, PROTECTED, STATIC, FINAL = 0x1, 0x2, 0x4, 0x8, 0x10
SUPER, SYNCHRONIZED, INTERFACE, ABSTRACT = 0x20, 0x20, 0x200, 0x400
NATIVE = 0x100

OPCODES = """
nop aconst_null iconst_m1 iconst_0 iconst_1 iconst_2 iconst_3 iconst_4
iconst_5 lconst_0 lconst_1 fconst_0 fconst_1 fconst_2 dconst_0 dconst_1
bipush sipush ldc ldc_w ldc2_w iload lload fload dload aload iload_0 iload_1
iload_2 iload_3 lload_0 lload_1 lload_2 lload_3 fload_0 fload_1 fload_2
fload_3 dload_0 dload_1 dload_2 dload_3 aload_0 aload_1 aload_2 aload_3
iaload laload faload daload aaload baload caload saload istore lstore fstore
dstore astore istore_0 istore_1 istore_2 istore_3 lstore_0 lstore_1 lstore_2
lstore_3 fstore_0 fstore_1 fstore_2 fstore_3 dstore_0 dstore_1 dstore_2
dstore_3 astore_0 astore_1 astore_2 astore_3 iastore lastore fastore dastore
aastore bastore castore sastore pop pop2 dup dup_x1 dup_x2 dup2 dup2_x1
dup2_x2 swap iadd ladd fadd dadd isub lsub fsub dsub imul lmul fmul dmul idiv
ldiv fdiv ddiv irem lrem frem drem ineg lneg fneg dneg ishl lshl ishr lshr
iushr lushr iand land ior lor ixor lxor iinc i2l i2f i2d l2i l2f l2d f2i f2l
f2d d2i d2l d2f i2b i2c i2s lcmp fcmpl fcmpg dcmpl dcmpg ifeq ifne iflt ifge
ifgt ifle if_icmpeq if_icmpne if_icmplt if_icmpge if_icmpgt if_icmple
if_acmpeq if_acmpne goto jsr ret tableswitch lookupswitch ireturn lreturn
freturn dreturn areturn return getstatic putstatic getfield putfield
invokevirtual invokespecial invokestatic invokeinterface invokedynamic new
newarray anewarray arraylength athrow checkcast instanceof monitorenter
monitorexit wide multianewarray ifnull ifnonnull goto_w jsr_w
""".split()
OP = {name: code for code, name in enumerate(OPCODES)}
assert OP["jsr_w"] == 0xC9 and OP["tableswitch"] == 0xAA

LOCAL_OPS = {"iload", "lload", "fload", "dload", "aload", "istore", "lstore",
             "fstore", "dstore", "astore", "ret"}
JUMP_OPS = {"ifeq", "ifne", "iflt", "ifge", "ifgt", "ifle", "if_icmpeq",
            "if_icmpne", "if_icmplt", "if_icmpge", "if_icmpgt", "if_icmple",
            "if_acmpeq", "if_acmpne", "goto", "jsr", "ifnull", "ifnonnull"}
FIELD_OPS = {"getstatic", "putstatic", "getfield", "putfield"}
CLASS_OPS = {"new", "anewarray", "checkcast", "instanceof"}
ARRAY_TYPES = {"boolean": 4, "char": 5, "float": 6, "double": 7, "byte": 8,
               "short": 9, "int": 10, "long": 11}


def u1(v):
    return struct.pack(">B", v & 0xFF)


def u2(v):
    return struct.pack(">H", v & 0xFFFF)


def u4(v):
    return struct.pack(">I", v & 0xFFFFFFFF)


class Pool:
    def __init__(self):
        self.entries = []
        self.index = {}
        self.next = 1

    def _add(self, key, data, width=1):
        if key in self.index:
            return self.index[key]
        idx = self.next
        self.index[key] = idx
        self.entries.append(data)
        self.next += width
        return idx

    def utf8(self, s):
        b = s.encode("utf-8") if isinstance(s, str) else s
        return self._add(("utf8", b), u1(1) + u2(len(b)) + b)

    def integer(self, v):
        return self._add(("int", v), u1(3) + struct.pack(">i", v))

    def float(self, v):
        b = struct.pack(">f", v)
        return self._add(("float", b), u1(4) + b)

    def long(self, v):
        return self._add(("long", v), u1(5) + struct.pack(">q", v), 2)

    def double(self, v):
        b = struct.pack(">d", v)
        return self._add(("double", b), u1(6) + b, 2)

    def cls(self, name):
        return self._add(("class", name), u1(7) + u2(self.utf8(name)))

    def string(self, s):
        return self._add(("string", s), u1(8) + u2(self.utf8(s)))

    def nat(self, name, desc):
        return self._add(("nat", name, desc),
                         u1(12) + u2(self.utf8(name)) + u2(self.utf8(desc)))

    def field(self, owner, name, desc):
        return self._add(("field", owner, name, desc),
                         u1(9) + u2(self.cls(owner)) + u2(self.nat(name, desc)))

    def method(self, owner, name, desc, interface=False):
        tag = 11 if interface else 10
        return self._add(("method", tag, owner, name, desc),
                         u1(tag) + u2(self.cls(owner)) +
                         u2(self.nat(name, desc)))

    def method_handle(self, kind, ref):
        return self._add(("mh", kind, ref), u1(15) + u1(kind) + u2(ref))

    def method_type(self, desc):
        return self._add(("mt", desc), u1(16) + u2(self.utf8(desc)))

    def dynamic(self, bsm, name, desc):
        return self._add(("dyn", bsm, name, desc),
                         u1(17) + u2(bsm) + u2(self.nat(name, desc)))

    def indy(self, bsm, name, desc):
        return self._add(("indy", bsm, name, desc),
                         u1(18) + u2(bsm) + u2(self.nat(name, desc)))

    def constant(self, c):
        kind = c[0]
        if kind == "int":
            return self.integer(c[1])
        if kind == "float":
            return self.float(c[1])
        if kind == "long":
            return self.long(c[1])
        if kind == "double":
            return self.double(c[1])
        if kind == "string":
            return self.string(c[1])
        if kind == "class":
            return self.cls(c[1])
        if kind == "mtype":
            return self.method_type(c[1])
        if kind == "mhandle":
            return self.method_handle(c[1], self.method(*c[2:]))
        if kind == "dynamic":
            return self.dynamic(c[1], c[2], c[3])
        raise ValueError(c)

    def serialize(self):
        return u2(self.next) + b"".join(self.entries)


def slots_of(desc):
    """Argument slot count of a method descriptor."""
    n, i = 0, 1
    while desc[i] != ")":
        c = desc[i]
        if c in "JD":
            n += 2
            i += 1
        elif c == "L":
            n += 1
            i = desc.index(";", i) + 1
        elif c == "[":
            while desc[i] == "[":
                i += 1
            i = desc.index(";", i) + 1 if desc[i] == "L" else i + 1
            n += 1
        else:
            n += 1
            i += 1
    return n


class Code:
    """Instruction list with symbolic labels."""

    def __init__(self, max_stack=8):
        self.items = []
        self.max_stack = max_stack
        self.max_locals = None
        self.handlers = []
        self.frames = []
        self.extra_attrs = []

    def label(self, name):
        self.items.append(("label", name))
        return self

    def line(self, n):
        self.items.append(("line", n))
        return self

    def i(self, op, *args):
        self.items.append(("insn", op, args))
        return self

    def handler(self, start, end, target, catch_type=None):
        self.handlers.append((start, end, target, catch_type))
        return self

    def frame(self, label, locals_, stack=()):
        """Declares a full_frame at `label`. Types: I F J D N(null)
        T(top) U(uninitialized this), 'new:<label>' or a class name."""
        self.frames.append((label, list(locals_), list(stack)))
        return self

    # Sizing and encoding.

    def _size(self, op, args, pc):
        if op in ("tableswitch", "lookupswitch"):
            pad = (4 - (pc + 1) % 4) % 4
            if op == "tableswitch":
                return 1 + pad + 12 + 4 * len(args[2])
            return 1 + pad + 8 + 8 * len(args[1])
        return len(self._encode(op, args, pc, None, None))

    def _encode(self, op, args, pc, labels, pool):
        def target(lbl):
            return 0 if labels is None else labels[lbl] - pc

        def cp(fn, *a):
            return 1 if pool is None else fn(*a)

        if op in LOCAL_OPS:
            idx = args[0]
            if idx > 255:
                return u1(OP["wide"]) + u1(OP[op]) + u2(idx)
            short = op + "_" + str(idx)
            if idx <= 3 and short in OP and not (len(args) > 1 and args[1]):
                return u1(OP[short])
            return u1(OP[op]) + u1(idx)
        if op == "iinc":
            idx, delta = args
            if idx > 255 or not -128 <= delta <= 127:
                return u1(OP["wide"]) + u1(OP["iinc"]) + u2(idx) + \
                    struct.pack(">h", delta)
            return u1(OP["iinc"]) + u1(idx) + struct.pack(">b", delta)
        if op == "bipush":
            return u1(OP[op]) + struct.pack(">b", args[0])
        if op == "sipush":
            return u1(OP[op]) + struct.pack(">h", args[0])
        if op == "ldc":
            idx = cp(pool.constant, args[0]) if pool else 1
            if pool is not None and idx > 255:
                raise ValueError("ldc index too large; use ldc_w")
            return u1(OP[op]) + u1(idx)
        if op in ("ldc_w", "ldc2_w"):
            return u1(OP[op]) + u2(cp(pool and pool.constant, args[0]))
        if op in JUMP_OPS:
            return u1(OP[op]) + struct.pack(">h", target(args[0]))
        if op in ("goto_w", "jsr_w"):
            return u1(OP[op]) + struct.pack(">i", target(args[0]))
        if op == "tableswitch":
            default, low, lbls = args
            pad = (4 - (pc + 1) % 4) % 4
            out = u1(OP[op]) + b"\0" * pad + struct.pack(
                ">iii", target(default), low, low + len(lbls) - 1)
            for lbl in lbls:
                out += struct.pack(">i", target(lbl))
            return out
        if op == "lookupswitch":
            default, pairs = args
            pad = (4 - (pc + 1) % 4) % 4
            out = u1(OP[op]) + b"\0" * pad + struct.pack(
                ">ii", target(default), len(pairs))
            for key, lbl in pairs:
                out += struct.pack(">ii", key, target(lbl))
            return out
        if op in FIELD_OPS:
            return u1(OP[op]) + u2(cp(pool and pool.field, *args))
        if op in ("invokevirtual", "invokespecial", "invokestatic"):
            owner, name, desc = args[:3]
            itf = len(args) > 3 and args[3]
            return u1(OP[op]) + u2(cp(pool and pool.method, owner, name, desc,
                                      itf))
        if op == "invokeinterface":
            owner, name, desc = args
            return u1(OP[op]) + u2(cp(pool and pool.method, owner, name, desc,
                                      True)) + u1(1 + slots_of(desc)) + u1(0)
        if op == "invokedynamic":
            bsm, name, desc = args
            return u1(OP[op]) + u2(cp(pool and pool.indy, bsm, name, desc)) + \
                u2(0)
        if op in CLASS_OPS:
            return u1(OP[op]) + u2(cp(pool and pool.cls, args[0]))
        if op == "newarray":
            return u1(OP[op]) + u1(ARRAY_TYPES[args[0]])
        if op == "multianewarray":
            return u1(OP[op]) + u2(cp(pool and pool.cls, args[0])) + \
                u1(args[1])
        if args:
            raise ValueError("unexpected operands for " + op)
        return u1(OP[op])

    def _vtype(self, t, pool, labels):
        simple = {"T": 0, "I": 1, "F": 2, "D": 3, "J": 4, "N": 5, "U": 6}
        if t in simple:
            return u1(simple[t])
        if t.startswith("new:"):
            return u1(8) + u2(labels[t[4:]])
        return u1(7) + u2(pool.cls(t))

    def assemble(self, pool, desc, static):
        labels = {}
        pc = 0
        layout = []
        pending_lines = []
        lines = []
        for item in self.items:
            if item[0] == "label":
                labels[item[1]] = pc
            elif item[0] == "line":
                pending_lines.append(item[1])
            else:
                for ln in pending_lines:
                    lines.append((pc, ln))
                pending_lines = []
                layout.append((pc, item[1], item[2]))
                pc += self._size(item[1], item[2], pc)
        labels["<end>"] = pc
        code = b""
        for at, op, args in layout:
            assert len(code) == at, (op, at, len(code))
            code += self._encode(op, args, at, labels, pool)

        max_locals = self.max_locals
        if max_locals is None:
            max_locals = slots_of(desc) + (0 if static else 1)
            for _, op, args in layout:
                base = op.split("_")[0]
                if op in LOCAL_OPS or op == "iinc":
                    width = 2 if op[0] in "ld" else 1
                    max_locals = max(max_locals, args[0] + width)
                elif base in LOCAL_OPS and "_" in op and op[-1].isdigit():
                    width = 2 if op[0] in "ld" else 1
                    max_locals = max(max_locals, int(op[-1]) + width)

        out = u2(self.max_stack) + u2(max_locals) + u4(len(code)) + code
        out += u2(len(self.handlers))
        for start, end, target, ctype in self.handlers:
            out += u2(labels[start]) + u2(labels[end]) + u2(labels[target])
            out += u2(pool.cls(ctype) if ctype else 0)
        attrs = []
        if lines:
            body = u2(len(lines))
            for at, ln in lines:
                body += u2(at) + u2(ln)
            attrs.append((pool.utf8("LineNumberTable"), body))
        if self.frames:
            frames = sorted(self.frames, key=lambda f: labels[f[0]])
            body = u2(len(frames))
            prev = -1
            for lbl, locs, stack in frames:
                at = labels[lbl]
                delta = at - prev - 1
                prev = at
                body += u1(255) + u2(delta) + u2(len(locs))
                for t in locs:
                    body += self._vtype(t, pool, labels)
                body += u2(len(stack))
                for t in stack:
                    body += self._vtype(t, pool, labels)
            attrs.append((pool.utf8("StackMapTable"), body))
        for name, body in self.extra_attrs:
            attrs.append((pool.utf8(name), body(pool, labels)))
        out += u2(len(attrs))
        for name_idx, body in attrs:
            out += u2(name_idx) + u4(len(body)) + body
        return out


class ClassFile:
    def __init__(self, name, super_name="java/lang/Object",
                 flags=PUBLIC | SUPER, version=52, interfaces=()):
        self.name = name
        self.super_name = super_name
        self.flags = flags
        self.version = version
        self.interfaces = list(interfaces)
        self.fields = []
        self.methods = []
        self.attributes = []

    def field(self, name, desc, flags=PUBLIC, constant=None, attrs=()):
        self.fields.append((flags, name, desc, constant, list(attrs)))
        return self

    def method(self, name, desc, flags=PUBLIC, max_stack=8, attrs=()):
        code = None if flags & (ABSTRACT | NATIVE) else Code(max_stack)
        self.methods.append((flags, name, desc, code, list(attrs)))
        return code

    def attribute(self, name, body):
        """`body` is bytes or a callable taking the pool."""
        self.attributes.append((name, body))
        return self

    def serialize(self):
        pool = Pool()
        body = u2(self.flags) + u2(pool.cls(self.name))
        body += u2(pool.cls(self.super_name) if self.super_name else 0)
        body += u2(len(self.interfaces))
        for itf in self.interfaces:
            body += u2(pool.cls(itf))

        def attr_bytes(name, payload):
            data = payload(pool) if callable(payload) else payload
            return u2(pool.utf8(name)) + u4(len(data)) + data

        body += u2(len(self.fields))
        for flags, name, desc, constant, attrs in self.fields:
            body += u2(flags) + u2(pool.utf8(name)) + u2(pool.utf8(desc))
            n = len(attrs) + (1 if constant is not None else 0)
            body += u2(n)
            if constant is not None:
                body += attr_bytes("ConstantValue",
                                   u2(pool.constant(constant)))
            for aname, payload in attrs:
                body += attr_bytes(aname, payload)
        body += u2(len(self.methods))
        for flags, name, desc, code, attrs in self.methods:
            body += u2(flags) + u2(pool.utf8(name)) + u2(pool.utf8(desc))
            body += u2(len(attrs) + (1 if code is not None else 0))
            if code is not None:
                body += u2(pool.utf8("Code"))
                data = code.assemble(pool, desc, flags & STATIC)
                body += u4(len(data)) + data
            for aname, payload in attrs:
                body += attr_bytes(aname, payload)
        body += u2(len(self.attributes))
        for aname, payload in self.attributes:
            body += attr_bytes(aname, payload)
        return (u4(0xCAFEBABE) + u2(0) + u2(self.version) + pool.serialize() +
                body)
