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

"""Round-trip coverage classes: every opcode family, handlers, switches,
wide forms, every constant kind and a spread of attributes."""

import struct

from jasm import (ABSTRACT, ClassFile, FINAL, INTERFACE, NATIVE, PRIVATE,
                  PUBLIC, STATIC, SUPER, SYNCHRONIZED, u1, u2, u4)

OBJECT = "java/lang/Object"
P = "cov/"


def numbers(out, write, default_ctor):
    cf = ClassFile(P + "Numbers")
    default_ctor(cf, 1)
    # static double mix(int a, long b, float c, double d)
    c = cf.method("mix", "(IJFD)D", PUBLIC | STATIC, max_stack=6)
    c.line(3).i("iload", 0).i("i2l").i("lload", 1).i("ladd").i("l2f")
    c.i("fload", 3).i("fadd").i("f2d").i("dload", 4).i("dadd").i("dstore", 6)
    c.line(4).i("iload", 0).i("istore", 300).i("iinc", 300, 5)
    c.i("iinc", 300, 1000).i("iinc", 0, -3).i("iload", 300).i("i2d")
    c.i("dload", 6).i("dmul").i("dstore", 6)
    c.line(5)
    for op in ("iadd", "isub", "imul", "idiv", "irem", "ishl", "ishr",
               "iushr", "iand", "ior", "ixor"):
        c.i("iload", 0).i("iconst_3").i(op).i("istore", 8)
    c.i("iload", 0).i("ineg").i("i2b").i("i2c").i("i2s").i("i2f").i("f2i")
    c.i("istore", 8)
    for op in ("ladd", "lsub", "lmul", "ldiv", "lrem", "land", "lor", "lxor"):
        c.i("lload", 1).i("lconst_1").i(op).i("lstore", 9)
    for op in ("lshl", "lshr", "lushr"):
        c.i("lload", 1).i("iconst_2").i(op).i("lstore", 9)
    c.i("lload", 1).i("lneg").i("l2i").i("i2l").i("l2d").i("d2l").i("lstore", 9)
    for t in "fd":
        for op in ("add", "sub", "mul", "div", "rem"):
            c.i(t + "load", 3 if t == "f" else 4).i(t + "const_1").i(t + op)
            c.i(t + "store", 11)
        c.i(t + "load", 3 if t == "f" else 4).i(t + "neg").i(t + "store", 11)
    c.i("fload", 3).i("f2l").i("l2f").i("f2d").i("d2f").i("fstore", 11)
    c.i("dload", 4).i("d2i").i("istore", 8)
    c.i("lload", 1).i("lload", 9).i("lcmp").i("pop")
    c.i("fload", 3).i("fconst_2").i("fcmpl").i("pop")
    c.i("fload", 3).i("fconst_0").i("fcmpg").i("pop")
    c.i("dload", 4).i("dconst_0").i("dcmpl").i("pop")
    c.i("dload", 4).i("dconst_1").i("dcmpg").i("pop")
    c.i("iload", 0, True).i("istore", 8, True)
    c.line(6).i("dload", 6).i("dreturn")
    write(out, "coverage", "classes", cf)


def constants(out, write, default_ctor):
    cf = ClassFile(P + "Constants")
    default_ctor(cf, 1)
    c = cf.method("all", "()V", PUBLIC | STATIC, max_stack=4)
    c.line(2)
    for op in ("aconst_null", "iconst_m1", "iconst_0", "iconst_1", "iconst_2",
               "iconst_3", "iconst_4", "iconst_5", "fconst_0", "fconst_1",
               "fconst_2"):
        c.i(op).i("pop")
    for op in ("lconst_0", "lconst_1", "dconst_0", "dconst_1"):
        c.i(op).i("pop2")
    c.i("bipush", -100).i("pop").i("sipush", 30000).i("pop")
    c.i("sipush", -129).i("pop")
    c.i("ldc", ("int", 100000)).i("pop")
    c.i("ldc", ("int", -2147483648)).i("pop")
    c.i("ldc", ("float", 3.5)).i("pop")
    c.i("ldc", ("float", float("nan"))).i("pop")
    c.i("ldc", ("float", -0.0)).i("pop")
    c.i("ldc", ("float", float("inf"))).i("pop")
    c.i("ldc_w", ("string", "wide index form")).i("pop")
    c.i("ldc", ("string", "héllo ☃ \U0001F600 \0 end")).i("pop")
    c.i("ldc", ("string", "")).i("pop")
    c.i("ldc2_w", ("long", 1 << 40)).i("pop2")
    c.i("ldc2_w", ("long", -(1 << 63))).i("pop2")
    c.i("ldc2_w", ("double", 2.718281828)).i("pop2")
    c.i("ldc2_w", ("double", -0.0)).i("pop2")
    c.i("ldc", ("class", "java/lang/String")).i("pop")
    c.i("ldc", ("class", "[Ljava/lang/Object;")).i("pop")
    c.i("ldc", ("mtype", "(I)Ljava/lang/String;")).i("pop")
    c.i("ldc", ("mhandle", 6, "java/lang/Integer", "toString",
                "(I)Ljava/lang/String;")).i("pop")
    c.i("ldc", ("mhandle", 1, P + "Constants", "field", "I")).i("pop")
    c.line(3).i("return")
    cf.field("field", "I", PRIVATE)
    write(out, "coverage", "classes", cf)


def branches(out, write, default_ctor):
    cf = ClassFile(P + "Branches")
    default_ctor(cf, 1)
    # static int pick(int a, int b, Object o, Object p): one test of each
    # branch opcode, each falling through into the next.
    c = cf.method("pick", "(IILjava/lang/Object;Ljava/lang/Object;)I",
                  PUBLIC | STATIC, max_stack=2)
    locs = ["I", "I", OBJECT, OBJECT]
    n = 0
    for rel in ("eq", "ne", "lt", "ge", "gt", "le"):
        c.line(2 + n).i("iload", 0).i("if" + rel, "t%d" % n)
        c.label("t%d" % n)
        c.frame("t%d" % n, locs)
        n += 1
        c.i("iload", 0).i("iload", 1).i("if_icmp" + rel, "t%d" % n)
        c.label("t%d" % n)
        c.frame("t%d" % n, locs)
        n += 1
    for op, args in (("if_acmpeq", 2), ("if_acmpne", 2), ("ifnull", 1),
                     ("ifnonnull", 1)):
        c.i("aload", 2)
        if args == 2:
            c.i("aload", 3)
        c.i(op, "t%d" % n)
        c.label("t%d" % n)
        c.frame("t%d" % n, locs)
        n += 1
    # A backward loop and a diamond with a value on the stack at the join.
    c.label("loop").i("iload", 0).i("ifle", "after")
    c.i("iinc", 0, -1).i("goto", "loop")
    c.label("after").i("iload", 1).i("ifeq", "zero")
    c.i("iconst_1").i("goto", "join")
    c.label("zero").i("iconst_2")
    c.label("join").i("ireturn")
    c.frame("loop", locs)
    c.frame("after", locs)
    c.frame("zero", locs)
    c.frame("join", locs, ["I"])
    # static String choose(boolean f): merge of two reference types.
    c = cf.method("choose", "(Z)Ljava/lang/Object;", PUBLIC | STATIC,
                  max_stack=2)
    c.i("iload", 0).i("ifeq", "b")
    c.i("new", "java/lang/StringBuilder").i("dup")
    c.i("invokespecial", "java/lang/StringBuilder", "<init>", "()V")
    c.i("goto", "j")
    c.label("b").i("ldc", ("string", "s"))
    c.label("j").i("areturn")
    c.frame("b", ["I"])
    c.frame("j", ["I"], [OBJECT])
    write(out, "coverage", "classes", cf)


def switches(out, write, default_ctor):
    cf = ClassFile(P + "Switches")
    default_ctor(cf, 1)
    c = cf.method("table", "(I)I", PUBLIC | STATIC, max_stack=1)
    c.line(2).i("iload", 0).i("tableswitch", "d", -1, ["a", "b", "a", "c"])
    for lbl, v in (("a", 10), ("b", 20), ("c", 30), ("d", 0)):
        c.label(lbl).i("bipush", v).i("ireturn")
        c.frame(lbl, ["I"])
    c = cf.method("lookup", "(I)I", PUBLIC | STATIC, max_stack=1)
    c.line(5).i("iconst_0").i("pop").i("iload", 0)
    c.i("lookupswitch", "d", [(-1000000, "a"), (7, "b"), (123456, "a")])
    for lbl, v in (("a", 1), ("b", 2), ("d", 3)):
        c.label(lbl).i("iconst_" + str(v)).i("ireturn")
        c.frame(lbl, ["I"])
    c = cf.method("empty", "(I)I", PUBLIC | STATIC, max_stack=1)
    c.i("iload", 0).i("lookupswitch", "d", [])
    c.label("d").i("iconst_0").i("ireturn")
    c.frame("d", ["I"])
    write(out, "coverage", "classes", cf)


def handlers(out, write, default_ctor):
    cf = ClassFile(P + "Handlers")
    default_ctor(cf, 1)
    # static int guarded(int[] a): try { return a[0]; }
    # catch (ArrayIndexOutOfBoundsException e) { return -1; }
    # catch (RuntimeException e) { return -2; }
    # finally-like catch-all rethrow.
    c = cf.method("guarded", "([I)I", PUBLIC | STATIC, max_stack=2)
    c.label("s").line(3).i("aload", 0).i("iconst_0").i("iaload").i("istore", 1)
    c.label("inner").i("iload", 1).i("iconst_1").i("idiv").i("istore", 1)
    c.label("e").i("iload", 1).i("ireturn")
    c.label("h1").line(5).i("astore", 2).i("iconst_m1").i("ireturn")
    c.label("h2").line(7).i("astore", 2).i("bipush", -2).i("ireturn")
    c.label("h3").line(9).i("astore", 2).i("aload", 2).i("athrow")
    c.handler("s", "e", "h1", "java/lang/ArrayIndexOutOfBoundsException")
    c.handler("inner", "e", "h2", "java/lang/RuntimeException")
    c.handler("s", "e", "h3", None)
    c.frame("h1", ["[I"], ["java/lang/ArrayIndexOutOfBoundsException"])
    c.frame("h2", ["[I", "I"], ["java/lang/RuntimeException"])
    c.frame("h3", ["[I"], ["java/lang/Throwable"])
    # void locked(Object o): synchronized (o) { o.hashCode(); }
    c = cf.method("locked", "(Ljava/lang/Object;)V", PUBLIC, max_stack=2)
    c.i("aload", 1).i("dup").i("astore", 2).i("monitorenter")
    c.label("s").i("aload", 1).i("invokevirtual", OBJECT, "hashCode", "()I")
    c.i("pop").i("aload", 2).i("monitorexit")
    c.label("e").i("goto", "done")
    c.label("h").i("astore", 3).i("aload", 2).i("monitorexit").i("aload", 3)
    c.i("athrow")
    c.label("done").i("return")
    c.handler("s", "e", "h", None)
    c.frame("h", [P + "Handlers", OBJECT, OBJECT], ["java/lang/Throwable"])
    c.frame("done", [P + "Handlers", OBJECT, OBJECT])
    c = cf.method("sync", "()V", PUBLIC | SYNCHRONIZED, max_stack=0,
                  attrs=[("Exceptions", lambda pool: u2(2) + u2(
                      pool.cls("java/io/IOException")) + u2(
                      pool.cls("java/lang/InterruptedException")))])
    c.i("return")
    write(out, "coverage", "classes", cf)


def arrays(out, write, default_ctor):
    cf = ClassFile(P + "Arrays")
    default_ctor(cf, 1)
    c = cf.method("fill", "()I", PUBLIC | STATIC, max_stack=6)
    for t, store, load, val in (("int", "iastore", "iaload", "iconst_1"),
                                ("long", "lastore", "laload", "lconst_1"),
                                ("float", "fastore", "faload", "fconst_1"),
                                ("double", "dastore", "daload", "dconst_1"),
                                ("byte", "bastore", "baload", "iconst_1"),
                                ("boolean", "bastore", "baload", "iconst_1"),
                                ("char", "castore", "caload", "iconst_1"),
                                ("short", "sastore", "saload", "iconst_1")):
        c.i("iconst_2").i("newarray", t).i("dup").i("iconst_0").i(val).i(store)
        c.i("iconst_0").i(load)
        c.i("pop2" if t in ("long", "double") else "pop")
    c.i("iconst_3").i("anewarray", "java/lang/String").i("dup").i("iconst_1")
    c.i("ldc", ("string", "x")).i("aastore").i("iconst_1").i("aaload").i("pop")
    c.i("iconst_2").i("iconst_3")
    c.i("multianewarray", "[[I", 2).i("dup").i("arraylength").i("pop")
    c.i("iconst_0").i("aaload").i("arraylength")
    c.i("iconst_1").i("anewarray", "[Ljava/lang/Object;").i("pop")
    c.i("ireturn")
    write(out, "coverage", "classes", cf)


def objects(out, write, default_ctor):
    name = P + "Objects"
    cf = ClassFile(name, interfaces=["java/lang/Runnable"])
    cf.field("value", "J", PRIVATE).field("shared", "Ljava/lang/Object;",
                                         PUBLIC | STATIC)
    cf.field("label", "Ljava/lang/String;", PRIVATE | FINAL)
    # Objects(String label) { super(); this.label = label; }
    c = cf.method("<init>", "(Ljava/lang/String;)V", max_stack=2)
    c.i("aload", 0).i("invokespecial", OBJECT, "<init>", "()V")
    c.i("aload", 0).i("aload", 1)
    c.i("putfield", name, "label", "Ljava/lang/String;").i("return")
    c = cf.method("run", "()V", max_stack=6)
    c.i("new", name).i("dup").i("ldc", ("string", "n"))
    c.i("invokespecial", name, "<init>", "(Ljava/lang/String;)V")
    c.i("putstatic", name, "shared", "Ljava/lang/Object;")
    c.i("getstatic", name, "shared", "Ljava/lang/Object;")
    c.i("instanceof", name).i("pop")
    c.i("getstatic", name, "shared", "Ljava/lang/Object;")
    c.i("checkcast", "java/lang/Runnable")
    c.i("invokeinterface", "java/lang/Runnable", "run", "()V")
    c.i("aload", 0).i("dup").i("getfield", name, "value", "J")
    c.i("lconst_1").i("ladd").i("putfield", name, "value", "J")
    c.i("invokestatic", name, "helper", "()I").i("pop")
    # Stack shuffles over category 1 and 2 values.
    c.i("iconst_1").i("iconst_2").i("swap").i("dup_x1").i("pop2").i("pop")
    c.i("iconst_1").i("iconst_2").i("iconst_3").i("dup_x2").i("pop2").i("pop2")
    c.i("lconst_1").i("dup2").i("pop2").i("pop2")
    c.i("iconst_1").i("lconst_0").i("dup2_x1").i("pop2").i("pop").i("pop2")
    c.i("lconst_1").i("lconst_0").i("dup2_x2").i("pop2").i("pop2").i("pop2")
    c.i("iconst_1").i("iconst_2").i("dup2").i("pop2").i("pop2")
    c.i("aload", 0).i("invokevirtual", OBJECT, "toString",
                      "()Ljava/lang/String;").i("pop")
    c.i("aload", 0).i("invokespecial", OBJECT, "hashCode", "()I").i("pop")
    c.i("nop").i("return")
    c = cf.method("helper", "()I", PRIVATE | STATIC, max_stack=1)
    c.i("iconst_4").i("ireturn")
    cf.method("nativeCall", "(I)V", PUBLIC | NATIVE)
    write(out, "coverage", "classes", cf)


def indy(out, write, default_ctor):
    name = P + "Indy"
    cf = ClassFile(name, version=55)
    default_ctor(cf, 1)
    c = cf.method("make", "()Ljava/lang/Runnable;", PUBLIC | STATIC,
                  max_stack=2)
    c.line(3).i("invokedynamic", 0, "run", "()Ljava/lang/Runnable;")
    c.i("ldc", ("dynamic", 1, "cst", "Ljava/lang/Object;")).i("pop")
    c.i("areturn")
    c = cf.method("lambda$make$0", "()V", PRIVATE | STATIC | 0x1000,
                  max_stack=0)
    c.line(3).i("return")

    def bootstrap(pool):
        lmf = pool.method_handle(6, pool.method(
            "java/lang/invoke/LambdaMetafactory", "metafactory",
            "(Ljava/lang/invoke/MethodHandles$Lookup;Ljava/lang/String;"
            "Ljava/lang/invoke/MethodType;Ljava/lang/invoke/MethodType;"
            "Ljava/lang/invoke/MethodHandle;Ljava/lang/invoke/MethodType;)"
            "Ljava/lang/invoke/CallSite;"))
        impl = pool.method_handle(6, pool.method(name, "lambda$make$0", "()V"))
        cb = pool.method_handle(6, pool.method(
            "java/lang/invoke/ConstantBootstraps", "nullConstant",
            "(Ljava/lang/invoke/MethodHandles$Lookup;Ljava/lang/String;"
            "Ljava/lang/Class;)Ljava/lang/Object;"))
        mt = pool.method_type("()V")
        return (u2(2) + u2(lmf) + u2(3) + u2(mt) + u2(impl) + u2(mt) +
                u2(cb) + u2(0))
    cf.attribute("BootstrapMethods", bootstrap)
    cf.attribute("InnerClasses", lambda pool: u2(1) + u2(pool.cls(
        "java/lang/invoke/MethodHandles$Lookup")) + u2(pool.cls(
            "java/lang/invoke/MethodHandles")) + u2(pool.utf8("Lookup")) +
        u2(0x19))
    write(out, "coverage", "classes", cf)


def element_value(pool, tag, v):
    if tag in "BCIS Z":
        return u1(ord(tag)) + u2(pool.integer(v))
    if tag == "J":
        return u1(ord(tag)) + u2(pool.long(v))
    if tag == "D":
        return u1(ord(tag)) + u2(pool.double(v))
    if tag == "F":
        return u1(ord(tag)) + u2(pool.float(v))
    if tag == "s":
        return u1(ord(tag)) + u2(pool.utf8(v))
    if tag == "c":
        return u1(ord(tag)) + u2(pool.utf8(v))
    if tag == "e":
        return u1(ord(tag)) + u2(pool.utf8(v[0])) + u2(pool.utf8(v[1]))
    if tag == "@":
        return u1(ord(tag)) + annotation(pool, *v)
    if tag == "[":
        out = u1(ord(tag)) + u2(len(v))
        for t, x in v:
            out += element_value(pool, t, x)
        return out
    raise ValueError(tag)


def annotation(pool, type_desc, pairs):
    out = u2(pool.utf8(type_desc)) + u2(len(pairs))
    for key, tag, v in pairs:
        out += u2(pool.utf8(key)) + element_value(pool, tag, v)
    return out


def attributes(out, write, default_ctor):
    name = P + "Attrs"
    cf = ClassFile(name, version=55)
    everything = [("b", "B", 1), ("c", "C", 65), ("i", "I", 7), ("s", "S", 2),
                  ("z", "Z", 1), ("j", "J", 1 << 33), ("d", "D", 0.5),
                  ("f", "F", 1.5), ("str", "s", "text"),
                  ("cls", "c", "Ljava/lang/String;"),
                  ("en", "e", ("Ljava/lang/annotation/RetentionPolicy;",
                               "RUNTIME")),
                  ("nested", "@", ("Lcov/Inner;", [("v", "I", 3)])),
                  ("arr", "[", [("I", 1), ("s", "two")])]

    def annotations(pool):
        return u2(2) + annotation(pool, "Lcov/Marker;", everything) + \
            annotation(pool, "Ljava/lang/Deprecated;", [])

    cf.attribute("SourceFile", lambda pool: u2(pool.utf8("Attrs.java")))
    cf.attribute("Signature", lambda pool: u2(pool.utf8(
        "<T:Ljava/lang/Object;>Ljava/lang/Object;")))
    cf.attribute("RuntimeVisibleAnnotations", annotations)
    cf.attribute("Deprecated", b"")
    cf.attribute("com.example.Custom", bytes(range(16)))
    cf.attribute("NestMembers", lambda pool: u2(1) + u2(pool.cls(
        P + "Attrs$Inner")))
    cf.attribute("InnerClasses", lambda pool: u2(1) + u2(pool.cls(
        P + "Attrs$Inner")) + u2(pool.cls(name)) + u2(pool.utf8("Inner")) +
        u2(0x9))
    cf.field("LIMIT", "I", PUBLIC | STATIC | FINAL, constant=("int", 42),
             attrs=[("Synthetic", b"")])
    cf.field("RATE", "D", PUBLIC | STATIC | FINAL, constant=("double", 0.25))
    cf.field("NAME", "Ljava/lang/String;", PUBLIC | STATIC | FINAL,
             constant=("string", "attrs"))
    cf.field("BIG", "J", PUBLIC | STATIC | FINAL, constant=("long", -5))
    cf.field("F", "F", PUBLIC | STATIC | FINAL, constant=("float", 2.5))
    cf.field("items", "Ljava/util/List;", PRIVATE,
             attrs=[("Signature", lambda pool: u2(pool.utf8(
                 "Ljava/util/List<TT;>;"))),
                 ("RuntimeInvisibleTypeAnnotations", lambda pool: u2(1) +
                  u1(0x13) + u1(1) + u1(3) + u1(0) + annotation(
                      pool, "Lcov/Marker;", [("i", "I", 1)]))])
    default_ctor(cf, 10)
    c = cf.method("get", "(ILjava/lang/String;)Ljava/lang/Object;",
                  max_stack=1,
                  attrs=[("MethodParameters", lambda pool: u1(2) + u2(
                      pool.utf8("index")) + u2(0x10) + u2(pool.utf8("key")) +
                      u2(0)),
                      ("RuntimeVisibleParameterAnnotations", lambda pool: u1(
                          2) + u2(0) + u2(1) + annotation(
                          pool, "Lcov/Marker;", [("s", "s", "k")])),
                      ("Signature", lambda pool: u2(pool.utf8(
                          "(ILjava/lang/String;)TT;")))])
    c.line(12).i("aconst_null").i("areturn")
    c.extra_attrs.append(("LocalVariableTable", lambda pool, labels: u2(1) +
                          u2(0) + u2(labels["<end>"]) + u2(pool.utf8("this")) +
                          u2(pool.utf8("Lcov/Attrs;")) + u2(0)))
    c.extra_attrs.append(("com.example.CodeNote", lambda pool, labels:
                          b"note"))
    write(out, "coverage", "classes", cf)

    inner = ClassFile(P + "Attrs$Inner", version=55, flags=SUPER)
    inner.attribute("NestHost", lambda pool: u2(pool.cls(name)))
    inner.attribute("InnerClasses", lambda pool: u2(1) + u2(pool.cls(
        P + "Attrs$Inner")) + u2(pool.cls(name)) + u2(pool.utf8("Inner")) +
        u2(0x9))
    default_ctor(inner)
    write(out, "coverage", "classes", inner)

    marker = ClassFile(P + "Marker", flags=PUBLIC | INTERFACE | ABSTRACT |
                       0x2000, interfaces=["java/lang/annotation/Annotation"])
    marker.method("i", "()I", PUBLIC | ABSTRACT, attrs=[
        ("AnnotationDefault", lambda pool: element_value(pool, "I", 5))])
    write(out, "coverage", "classes", marker)


def interfaces(out, write, default_ctor):
    empty = ClassFile(P + "Empty", flags=PUBLIC | INTERFACE | ABSTRACT)
    write(out, "coverage", "classes", empty)
    shape = ClassFile(P + "Shape", flags=PUBLIC | INTERFACE | ABSTRACT)
    shape.method("area", "()D", PUBLIC | ABSTRACT)
    c = shape.method("twice", "()D", PUBLIC, max_stack=4)
    c.i("aload", 0).i("invokeinterface", P + "Shape", "area", "()D")
    c.i("ldc2_w", ("double", 2.0)).i("dmul").i("dreturn")
    c = shape.method("unit", "()L%sShape;" % P, PUBLIC | STATIC, max_stack=1)
    c.i("aconst_null").i("areturn")
    write(out, "coverage", "classes", shape)
    ab = ClassFile(P + "Figure", flags=PUBLIC | SUPER | ABSTRACT,
                   interfaces=[P + "Shape"])
    default_ctor(ab)
    ab.method("name", "()Ljava/lang/String;", PUBLIC | ABSTRACT)
    c = ab.method("area", "()D", PUBLIC, max_stack=2)
    c.i("aload", 0).i("invokeinterface", P + "Shape", "twice", "()D")
    c.i("dreturn")
    write(out, "coverage", "classes", ab)


def versions(out, write, default_ctor):
    # Major 49 predates StackMapTable: branches carry no frames.
    old = ClassFile(P + "Old", version=49)
    default_ctor(old)
    c = old.method("abs", "(I)I", PUBLIC | STATIC, max_stack=1)
    c.i("iload", 0).i("ifge", "pos").i("iload", 0).i("ineg").i("ireturn")
    c.label("pos").i("iload", 0).i("ireturn")
    write(out, "coverage", "classes", old)

    # Major 61 with a Record attribute.
    rec = ClassFile(P + "Point", "java/lang/Record", PUBLIC | FINAL | SUPER,
                    version=61)
    rec.field("x", "I", PRIVATE | FINAL)
    c = rec.method("<init>", "(I)V", max_stack=2)
    c.i("aload", 0).i("invokespecial", "java/lang/Record", "<init>", "()V")
    c.i("aload", 0).i("iload", 1).i("putfield", P + "Point", "x", "I")
    c.i("return")
    c = rec.method("x", "()I", max_stack=1)
    c.i("aload", 0).i("getfield", P + "Point", "x", "I").i("ireturn")
    rec.attribute("Record", lambda pool: u2(1) + u2(pool.utf8("x")) +
                  u2(pool.utf8("I")) + u2(1) + u2(pool.utf8("Signature")) +
                  u4(2) + u2(pool.utf8("I")))
    write(out, "coverage", "classes", rec)

    # No debug information at all.
    bare = ClassFile(P + "Bare")
    default_ctor(bare)
    c = bare.method("id", "(Ljava/lang/Object;)Ljava/lang/Object;", max_stack=1)
    c.i("aload", 1).i("areturn")
    write(out, "coverage", "classes", bare)


def far(out, write, default_ctor):
    # A forward jump over more than 32 KiB of code needs goto_w; a short
    # goto_w must also survive (the emitter is free to shorten it).
    cf = ClassFile(P + "Far")
    default_ctor(cf)
    c = cf.method("jump", "(I)I", PUBLIC | STATIC, max_stack=1)
    c.i("iload", 0).i("ifne", "near")
    c.i("goto_w", "far")
    c.label("near")
    for _ in range(33000):
        c.i("nop")
    c.i("iconst_1").i("ireturn")
    c.label("far").i("iconst_2").i("ireturn")
    c.frame("near", ["I"])
    c.frame("far", ["I"])
    c = cf.method("short", "()I", PUBLIC | STATIC, max_stack=1)
    c.i("goto_w", "x")
    c.label("x").i("iconst_0").i("ireturn")
    c.frame("x", [])
    write(out, "coverage", "classes", cf)


def uninitialized(out, write, default_ctor):
    # new ... <init> across a branch: the uninitialized type sits in a frame.
    name = P + "Uninit"
    cf = ClassFile(name)
    default_ctor(cf)
    c = cf.method("make", "(Z)Ljava/lang/StringBuilder;", PUBLIC | STATIC,
                  max_stack=3)
    c.label("n").i("new", "java/lang/StringBuilder").i("dup")
    c.i("iload", 0).i("ifeq", "empty")
    c.i("ldc", ("string", "x"))
    c.i("invokespecial", "java/lang/StringBuilder", "<init>",
        "(Ljava/lang/String;)V")
    c.i("areturn")
    c.label("empty")
    c.i("invokespecial", "java/lang/StringBuilder", "<init>", "()V")
    c.i("areturn")
    c.frame("empty", ["I"], ["new:n", "new:n"])
    # A constructor that branches before calling super().
    c = cf.method("<init>", "(I)V", max_stack=2)
    c.i("aload", 0).i("iload", 1).i("ifeq", "z")
    c.i("invokespecial", OBJECT, "<init>", "()V").i("return")
    c.label("z").i("invokespecial", OBJECT, "<init>", "()V").i("return")
    c.frame("z", ["U", "I"], ["U"])
    write(out, "coverage", "classes", cf)


def generate(out, write, default_ctor):
    for fn in (numbers, constants, branches, switches, handlers, arrays,
               objects, indy, attributes, interfaces, versions, far,
               uninitialized):
        fn(out, write, default_ctor)
