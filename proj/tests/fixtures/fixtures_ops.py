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

"""Small projects, one per operator group, each with at most four classes
and six methods per class. Every builtin operator has at least one valid
application in the project named for its group (see tests/catalog_test.cc).
"""

from jasm import ClassFile, PUBLIC, PRIVATE, STATIC, SUPER, FINAL

OBJECT = "java/lang/Object"
STRING = "Ljava/lang/String;"
INT_RELS = ("eq", "ne", "lt", "ge", "gt", "le")


def arith(out, write, default_ctor):
    # class Calc {
    #   static int iops(int a, int b) {
    #     int x = a + b; x = x - b; x = x * a; x = x / b; x = x % a;
    #     return x; }
    #   static long lops(long a, long b) { same shape }
    # }
    cf = ClassFile("ops/arith/Calc")
    default_ctor(cf, 1)
    for name, desc, p in (("iops", "(II)I", "i"), ("lops", "(JJ)J", "l")):
        c = cf.method(name, desc, PUBLIC | STATIC, max_stack=4)
        a, b, x = (0, 1, 2) if p == "i" else (0, 2, 4)
        c.line(3).i(p + "load", a).i(p + "load", b).i(p + "add")
        c.i(p + "store", x)
        ln = 4
        for op, rhs in (("sub", b), ("mul", a), ("div", b), ("rem", a)):
            c.line(ln).i(p + "load", x).i(p + "load", rhs).i(p + op)
            c.i(p + "store", x)
            ln += 1
        c.line(ln).i(p + "load", x).i(p + "return")
    write(out, "ops/arith", "classes", cf)


def relational(out, write, default_ctor):
    # class Cmp {
    #   static int icmp(int a, int b) {
    #     if (a == b) return 1; if (a != b) return 2; ... if (a <= b) return 6;
    #     return 0; }
    #   static int izero(int a) { if (a == 0) return 1; ... return 0; }
    # }
    cf = ClassFile("ops/rel/Cmp")
    default_ctor(cf, 1)
    for name, desc, two in (("icmp", "(II)I", True), ("izero", "(I)I", False)):
        c = cf.method(name, desc, PUBLIC | STATIC, max_stack=2)
        locals_ = ["I", "I"] if two else ["I"]
        for k, rel in enumerate(INT_RELS, 1):
            c.line(2 + k).i("iload", 0)
            if two:
                c.i("iload", 1).i("if_icmp" + rel, "r%d" % k)
            else:
                c.i("if" + rel, "r%d" % k)
        c.line(9).i("iconst_0").i("ireturn")
        for k in range(1, 7):
            c.label("r%d" % k).i("bipush", k).i("ireturn")
            c.frame("r%d" % k, locals_)
    write(out, "ops/rel", "classes", cf)


def inheritance(out, write, default_ctor):
    base, derived, other = "ops/inh/Base", "ops/inh/Derived", "ops/inh/Other"
    # class Base {
    #   int count; String name;
    #   Base(int count, String name) { this.count = count; this.name = name; }
    #   String describe() { return name; }
    #   void reset() { count = 0; }
    #   void show() { }
    # }
    cf = ClassFile(base)
    cf.field("count", "I").field("name", STRING)
    c = cf.method("<init>", "(ILjava/lang/String;)V", max_stack=2)
    c.line(4).i("aload", 0).i("invokespecial", OBJECT, "<init>", "()V")
    c.line(5).i("aload", 0).i("iload", 1).i("putfield", base, "count", "I")
    c.line(6).i("aload", 0).i("aload", 2).i("putfield", base, "name", STRING)
    c.line(7).i("return")
    c = cf.method("describe", "()Ljava/lang/String;", max_stack=1)
    c.line(9).i("aload", 0).i("getfield", base, "name", STRING).i("areturn")
    c = cf.method("reset", "()V", max_stack=2)
    c.line(11).i("aload", 0).i("iconst_0").i("putfield", base, "count", "I")
    c.line(12).i("return")
    c = cf.method("show", "()V", max_stack=0)
    c.line(14).i("return")
    write(out, "ops/inh", "classes", cf)

    # class Derived extends Base {
    #   int count;                          // hides Base.count
    #   Derived() { super(1, "d"); count = 2; }
    #   String describe() { return "derived"; }
    #   void reset() { super.reset(); count = 0; }
    #   int total() { return count; }
    # }
    cf = ClassFile(derived, base)
    cf.field("count", "I")
    c = cf.method("<init>", "()V", max_stack=3)
    c.line(4).i("aload", 0).i("iconst_1").i("ldc", ("string", "d"))
    c.i("invokespecial", base, "<init>", "(ILjava/lang/String;)V")
    c.line(5).i("aload", 0).i("iconst_2").i("putfield", derived, "count", "I")
    c.line(6).i("return")
    c = cf.method("describe", "()Ljava/lang/String;", max_stack=1)
    c.line(8).i("ldc", ("string", "derived")).i("areturn")
    c = cf.method("reset", "()V", max_stack=2)
    c.line(10).i("aload", 0).i("invokespecial", base, "reset", "()V")
    c.line(11).i("aload", 0).i("iconst_0").i("putfield", derived, "count", "I")
    c.line(12).i("return")
    c = cf.method("total", "()I", max_stack=1)
    c.line(14).i("aload", 0).i("getfield", derived, "count", "I").i("ireturn")
    write(out, "ops/inh", "classes", cf)

    # class Other extends Base {
    #   Other() { super(3, "o"); }
    #   void show() { }
    # }
    cf = ClassFile(other, base)
    c = cf.method("<init>", "()V", max_stack=3)
    c.line(3).i("aload", 0).i("iconst_3").i("ldc", ("string", "o"))
    c.i("invokespecial", base, "<init>", "(ILjava/lang/String;)V")
    c.line(4).i("return")
    c = cf.method("show", "()V", max_stack=0)
    c.line(6).i("return")
    write(out, "ops/inh", "classes", cf)


def polymorphism(out, write, default_ctor):
    def animals(pkg, extra_dog=()):
        # class Animal { String speak() { return "..."; } }
        # class Dog extends Animal { String speak() { return "woof"; }
        #                            void fetch() { } }
        # class Cat extends Animal { }
        animal = ClassFile(pkg + "/Animal")
        default_ctor(animal, 1)
        c = animal.method("speak", "()Ljava/lang/String;", max_stack=1)
        c.line(2).i("ldc", ("string", "...")).i("areturn")
        write(out, pkg, "classes", animal)
        dog = ClassFile(pkg + "/Dog", pkg + "/Animal")
        default_ctor(dog, 1)
        c = dog.method("speak", "()Ljava/lang/String;", max_stack=1)
        c.line(2).i("ldc", ("string", "woof")).i("areturn")
        c = dog.method("fetch", "()V", max_stack=0)
        c.line(3).i("return")
        write(out, pkg, "classes", dog)
        return animal, dog

    # poly_new: object creation and casts.
    pkg = "ops/polynew"
    animals(pkg)
    cat = ClassFile(pkg + "/Cat", pkg + "/Animal")
    default_ctor(cat, 1)
    write(out, pkg, "classes", cat)
    a, d = pkg + "/Animal", pkg + "/Dog"
    la, ld = "L%s;" % a, "L%s;" % d
    # class Zoo {
    #   Animal pet; Object any;
    #   Animal makeAnimal() { return new Animal(); }
    #   Animal makeDog() { return new Dog(); }
    #   Animal toAnimal(Object o) { return (Animal) o; }
    #   void stash(Object o) { any = (Dog) o; }
    #   Animal getPet() { return pet; }
    # }
    zoo = ClassFile(pkg + "/Zoo")
    zoo.field("pet", la).field("any", "Ljava/lang/Object;")
    default_ctor(zoo, 1)
    for name, cls in (("makeAnimal", a), ("makeDog", d)):
        c = zoo.method(name, "()" + la, max_stack=2)
        c.line(3).i("new", cls).i("dup").i("invokespecial", cls, "<init>", "()V")
        c.i("areturn")
    c = zoo.method("toAnimal", "(Ljava/lang/Object;)" + la, max_stack=1)
    c.line(5).i("aload", 1).i("checkcast", a).i("areturn")
    c = zoo.method("stash", "(Ljava/lang/Object;)V", max_stack=2)
    c.line(7).i("aload", 0).i("aload", 1).i("checkcast", d)
    c.i("putfield", pkg + "/Zoo", "any", "Ljava/lang/Object;")
    c.line(8).i("return")
    c = zoo.method("getPet", "()" + la, max_stack=1)
    c.line(10).i("aload", 0).i("getfield", pkg + "/Zoo", "pet", la)
    c.i("areturn")
    write(out, pkg, "classes", zoo)

    # poly_decl: declared types of fields and parameters.
    pkg = "ops/polydecl"
    animals(pkg)
    a, d = pkg + "/Animal", pkg + "/Dog"
    la, ld = "L%s;" % a, "L%s;" % d
    k = pkg + "/Keeper"
    # class Keeper {
    #   Dog dog; Animal pet;
    #   void setDog(Dog d) { dog = d; }
    #   String petName() { return pet.speak(); }
    #   String feed(Animal x) { return x.speak(); }
    #   String feedDog(Dog x) { return x.speak(); }
    #   void walk(Dog x) { x.fetch(); }
    # }
    cf = ClassFile(k)
    cf.field("dog", ld).field("pet", la)
    default_ctor(cf, 1)
    c = cf.method("setDog", "(%s)V" % ld, max_stack=2)
    c.line(3).i("aload", 0).i("aload", 1).i("putfield", k, "dog", ld)
    c.line(4).i("return")
    c = cf.method("petName", "()Ljava/lang/String;", max_stack=1)
    c.line(6).i("aload", 0).i("getfield", k, "pet", la)
    c.i("invokevirtual", a, "speak", "()Ljava/lang/String;").i("areturn")
    for name, t in (("feed", la), ("feedDog", ld)):
        c = cf.method(name, "(%s)Ljava/lang/String;" % t, max_stack=1)
        c.line(8).i("aload", 1)
        c.i("invokevirtual", a, "speak", "()Ljava/lang/String;").i("areturn")
    c = cf.method("walk", "(%s)V" % ld, max_stack=1)
    c.line(10).i("aload", 1).i("invokevirtual", d, "fetch", "()V")
    c.line(11).i("return")
    write(out, pkg, "classes", cf)

    # poly_overload: overloaded methods.
    pkg = "ops/polyover"
    animals(pkg)
    a, d = pkg + "/Animal", pkg + "/Dog"
    la, ld = "L%s;" % a, "L%s;" % d
    g = pkg + "/Greeter"
    # class Greeter {
    #   String greet(Animal a) { return "animal"; }
    #   String greet(Dog d) { return "dog"; }
    #   String hello() { return greet(new Dog()); }
    # }
    cf = ClassFile(g)
    default_ctor(cf, 1)
    for t, text in ((la, "animal"), (ld, "dog")):
        c = cf.method("greet", "(%s)Ljava/lang/String;" % t, max_stack=1)
        c.line(3).i("ldc", ("string", text)).i("areturn")
    c = cf.method("hello", "()Ljava/lang/String;", max_stack=3)
    c.line(5).i("aload", 0).i("new", d).i("dup")
    c.i("invokespecial", d, "<init>", "()V")
    c.i("invokevirtual", g, "greet", "(%s)Ljava/lang/String;" % ld)
    c.i("areturn")
    write(out, pkg, "classes", cf)


def javaspec(out, write, default_ctor):
    pkg = "ops/js"
    p = pkg + "/Person"
    # class Person {
    #   String name; String nick;
    #   Person(String name) { this.name = name; }
    #   String getName() { return name; }  String getNick() { return nick; }
    #   void setName(String name) { this.name = name; }
    #   void setNick(String nick) { this.nick = nick; }
    # }
    cf = ClassFile(p)
    cf.field("name", STRING).field("nick", STRING)
    c = cf.method("<init>", "(Ljava/lang/String;)V", max_stack=2)
    c.line(4).i("aload", 0).i("invokespecial", OBJECT, "<init>", "()V")
    c.line(5).i("aload", 0).i("aload", 1).i("putfield", p, "name", STRING)
    c.line(6).i("return")
    ln = 8
    for field in ("name", "nick"):
        cap = field.capitalize()
        c = cf.method("get" + cap, "()" + STRING, max_stack=1)
        c.line(ln).i("aload", 0).i("getfield", p, field, STRING).i("areturn")
        c = cf.method("set" + cap, "(%s)V" % STRING, max_stack=2)
        c.line(ln + 2).i("aload", 0).i("aload", 1)
        c.i("putfield", p, field, STRING).line(ln + 3).i("return")
        ln += 5
    write(out, pkg, "classes", cf)

    # class Greeting {
    #   String greet(Person p) { return p.getName(); }
    #   void rename(Person p, String s) { p.setName(s); }
    # }
    cf = ClassFile(pkg + "/Greeting")
    default_ctor(cf, 1)
    c = cf.method("greet", "(L%s;)%s" % (p, STRING), max_stack=1)
    c.line(3).i("aload", 1).i("invokevirtual", p, "getName", "()" + STRING)
    c.i("areturn")
    c = cf.method("rename", "(L%s;%s)V" % (p, STRING), max_stack=2)
    c.line(5).i("aload", 1).i("aload", 2)
    c.i("invokevirtual", p, "setName", "(%s)V" % STRING)
    c.line(6).i("return")
    write(out, pkg, "classes", cf)

    # class Config { static int LIMIT = 10; static String MODE = "fast"; }
    cf = ClassFile(pkg + "/Config")
    cf.field("LIMIT", "I", PUBLIC | STATIC).field("MODE", STRING, PUBLIC | STATIC)
    default_ctor(cf, 1)
    c = cf.method("<clinit>", "()V", STATIC, max_stack=1)
    c.line(2).i("bipush", 10).i("putstatic", pkg + "/Config", "LIMIT", "I")
    c.line(3).i("ldc", ("string", "fast"))
    c.i("putstatic", pkg + "/Config", "MODE", STRING)
    c.line(4).i("return")
    write(out, pkg, "classes", cf)

    # class Compare {
    #   static boolean same(Object a, Object b) { return a == b; }
    #   static boolean equalText(String a, String b) { return a.equals(b); }
    # }
    cf = ClassFile(pkg + "/Compare")
    default_ctor(cf, 1)
    c = cf.method("same", "(Ljava/lang/Object;Ljava/lang/Object;)Z",
                  PUBLIC | STATIC, max_stack=2)
    c.line(3).i("aload", 0).i("aload", 1).i("if_acmpne", "no")
    c.i("iconst_1").i("ireturn")
    c.label("no").i("iconst_0").i("ireturn")
    c.frame("no", [OBJECT, OBJECT])
    c = cf.method("equalText", "(%s%s)Z" % (STRING, STRING), PUBLIC | STATIC,
                  max_stack=2)
    c.line(5).i("aload", 0).i("aload", 1)
    c.i("invokevirtual", "java/lang/String", "equals", "(Ljava/lang/Object;)Z")
    c.i("ifeq", "no")
    c.i("iconst_1").i("ireturn")
    c.label("no").i("iconst_0").i("ireturn")
    c.frame("no", ["java/lang/String", "java/lang/String"])
    write(out, pkg, "classes", cf)


def collections(out, write, default_ctor):
    r = "ops/coll/Registry"
    lst, mp = "Ljava/util/List;", "Ljava/util/Map;"
    # class Registry {
    #   List items = new ArrayList(); Map index = new HashMap();
    #   void add(String s) { items.add(s); }
    #   void remove(String s) { items.remove(s); }
    #   void clear() { items.clear(); index.clear(); }
    #   void put(String k, String v) { index.put(k, v); }
    #   void drop(String k) { index.remove(k); }
    # }
    cf = ClassFile(r)
    cf.field("items", lst).field("index", mp)
    c = cf.method("<init>", "()V", max_stack=3)
    c.line(3).i("aload", 0).i("invokespecial", OBJECT, "<init>", "()V")
    for field, desc, impl in (("items", lst, "java/util/ArrayList"),
                              ("index", mp, "java/util/HashMap")):
        c.i("aload", 0).i("new", impl).i("dup")
        c.i("invokespecial", impl, "<init>", "()V").i("putfield", r, field, desc)
    c.i("return")
    for name, method in (("add", "add"), ("remove", "remove")):
        c = cf.method(name, "(Ljava/lang/String;)V", max_stack=2)
        c.line(5).i("aload", 0).i("getfield", r, "items", lst).i("aload", 1)
        c.i("invokeinterface", "java/util/List", method, "(Ljava/lang/Object;)Z")
        c.i("pop").i("return")
    c = cf.method("clear", "()V", max_stack=1)
    c.line(7).i("aload", 0).i("getfield", r, "items", lst)
    c.i("invokeinterface", "java/util/List", "clear", "()V")
    c.line(8).i("aload", 0).i("getfield", r, "index", mp)
    c.i("invokeinterface", "java/util/Map", "clear", "()V")
    c.i("return")
    c = cf.method("put", "(Ljava/lang/String;Ljava/lang/String;)V", max_stack=3)
    c.line(10).i("aload", 0).i("getfield", r, "index", mp)
    c.i("aload", 1).i("aload", 2)
    c.i("invokeinterface", "java/util/Map", "put",
        "(Ljava/lang/Object;Ljava/lang/Object;)Ljava/lang/Object;")
    c.i("pop").i("return")
    c = cf.method("drop", "(Ljava/lang/String;)V", max_stack=2)
    c.line(12).i("aload", 0).i("getfield", r, "index", mp).i("aload", 1)
    c.i("invokeinterface", "java/util/Map", "remove",
        "(Ljava/lang/Object;)Ljava/lang/Object;")
    c.i("pop").i("return")
    write(out, "ops/coll", "classes", cf)


def api(out, write, default_ctor):
    t = "ops/api/Text"
    s = "java/lang/String"
    # class Text {
    #   String shout(String s) { return s.toUpperCase(); }
    #   String both(String s) { return s.toUpperCase().trim(); }
    #   int clamp(int v) { return Math.max(v, 10); }
    #   static int sub(int a, int b) { return a - b; }
    #   int delta(int a, int b) { return sub(a, b); }
    # }
    cf = ClassFile(t)
    default_ctor(cf, 1)
    c = cf.method("shout", "(Ljava/lang/String;)Ljava/lang/String;", max_stack=1)
    c.line(3).i("aload", 1).i("invokevirtual", s, "toUpperCase", "()" + STRING)
    c.i("areturn")
    c = cf.method("both", "(Ljava/lang/String;)Ljava/lang/String;", max_stack=1)
    c.line(5).i("aload", 1).i("invokevirtual", s, "toUpperCase", "()" + STRING)
    c.i("invokevirtual", s, "trim", "()" + STRING).i("areturn")
    c = cf.method("clamp", "(I)I", max_stack=2)
    c.line(7).i("iload", 1).i("bipush", 10)
    c.i("invokestatic", "java/lang/Math", "max", "(II)I").i("ireturn")
    c = cf.method("sub", "(II)I", PUBLIC | STATIC, max_stack=2)
    c.line(9).i("iload", 0).i("iload", 1).i("isub").i("ireturn")
    c = cf.method("delta", "(II)I", max_stack=2)
    c.line(11).i("iload", 1).i("iload", 2)
    c.i("invokestatic", t, "sub", "(II)I").i("ireturn")
    write(out, "ops/api", "classes", cf)


def e2e_tests(out, write, default_ctor, fail):
    # Tests over copies of the arith, rel, inh, coll and js fixtures, used by
    # the end-to-end and determinism runs. Classes are written into
    # e2e/classes by generate(); tests go to e2e/tests.
    cf = ClassFile("e2e/CoreTest")
    default_ctor(cf)

    def assert_int(c, expected_push, call):
        c.i(*expected_push)
        call(c)
        c.i("invokestatic", "testlib/Assert", "assertEqualsInt", "(II)V")

    c = cf.method("testIops", "()V", max_stack=4)
    assert_int(c, ("iconst_2",), lambda c: c.i("bipush", 7).i("iconst_3").i(
        "invokestatic", "ops/arith/Calc", "iops", "(II)I"))
    c.i("return")
    c = cf.method("testLops", "()V", max_stack=6)
    assert_int(c, ("iconst_2",), lambda c: c.i("ldc2_w", ("long", 7)).i(
        "ldc2_w", ("long", 3)).i("invokestatic", "ops/arith/Calc", "lops",
                                 "(JJ)J").i("l2i"))
    c.i("return")
    c = cf.method("testIcmp", "()V", max_stack=4)
    assert_int(c, ("iconst_1",), lambda c: c.i("iconst_1").i("iconst_1").i(
        "invokestatic", "ops/rel/Cmp", "icmp", "(II)I"))
    assert_int(c, ("iconst_2",), lambda c: c.i("iconst_1").i("iconst_2").i(
        "invokestatic", "ops/rel/Cmp", "icmp", "(II)I"))
    c.i("return")
    c = cf.method("testIzero", "()V", max_stack=4)
    assert_int(c, ("iconst_1",), lambda c: c.i("iconst_0").i(
        "invokestatic", "ops/rel/Cmp", "izero", "(I)I"))
    assert_int(c, ("iconst_2",), lambda c: c.i("iconst_5").i(
        "invokestatic", "ops/rel/Cmp", "izero", "(I)I"))
    c.i("return")
    c = cf.method("testDerived", "()V", max_stack=4)
    c.i("new", "ops/inh/Derived").i("dup")
    c.i("invokespecial", "ops/inh/Derived", "<init>", "()V").i("astore", 1)
    assert_int(c, ("iconst_2",), lambda c: c.i("aload", 1).i(
        "invokevirtual", "ops/inh/Derived", "total", "()I"))
    c.i("ldc", ("string", "derived")).i("aload", 1)
    c.i("invokevirtual", "ops/inh/Base", "describe", "()Ljava/lang/String;")
    c.i("invokestatic", "testlib/Assert", "assertEquals",
        "(Ljava/lang/Object;Ljava/lang/Object;)V")
    c.i("return")
    c = cf.method("testPerson", "()V", max_stack=4)
    c.i("new", "ops/js/Person").i("dup").i("ldc", ("string", "ann"))
    c.i("invokespecial", "ops/js/Person", "<init>", "(Ljava/lang/String;)V")
    c.i("astore", 1)
    c.i("ldc", ("string", "ann")).i("aload", 1)
    c.i("invokevirtual", "ops/js/Person", "getName", "()Ljava/lang/String;")
    c.i("invokestatic", "testlib/Assert", "assertEquals",
        "(Ljava/lang/Object;Ljava/lang/Object;)V")
    c.i("return")
    c = cf.method("testRegistry", "()V", max_stack=4)
    c.i("new", "ops/coll/Registry").i("dup")
    c.i("invokespecial", "ops/coll/Registry", "<init>", "()V").i("astore", 1)
    c.i("aload", 1).i("ldc", ("string", "x"))
    c.i("invokevirtual", "ops/coll/Registry", "add", "(Ljava/lang/String;)V")
    assert_int(c, ("iconst_1",), lambda c: c.i("aload", 1).i(
        "getfield", "ops/coll/Registry", "items", "Ljava/util/List;").i(
        "invokeinterface", "java/util/List", "size", "()I"))
    c.i("return")
    write(out, "e2e", "tests", cf)


def generate(out, write, default_ctor, fail):
    arith(out, write, default_ctor)
    relational(out, write, default_ctor)
    inheritance(out, write, default_ctor)
    polymorphism(out, write, default_ctor)
    javaspec(out, write, default_ctor)
    collections(out, write, default_ctor)
    api(out, write, default_ctor)

    def copy_into(project):
        return lambda o, _p, area, cf: write(o, project, area, cf)

    e2e = copy_into("e2e")
    arith(out, e2e, default_ctor)
    relational(out, e2e, default_ctor)
    inheritance(out, e2e, default_ctor)
    javaspec(out, e2e, default_ctor)
    collections(out, e2e, default_ctor)
    e2e_tests(out, write, default_ctor, fail)
