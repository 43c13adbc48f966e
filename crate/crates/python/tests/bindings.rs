use pyo3::prelude::*;
use pyo3::types::PyDict;
use pyo3::wrap_pymodule;

fn run(code: &str) {
    Python::attach(|py| {
        let m = wrap_pymodule!(prokit_py::init)(py);
        let globals = PyDict::new(py);
        globals.set_item("pk", m).unwrap();
        let code = std::ffi::CString::new(code).unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            e.print(py);
            panic!("python code failed");
        }
    });
}

#[test]
fn smith_form_round_trip() {
    run(r#"
a = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
d, u, v = pk.smith_normal_form(a)
mul = lambda x, y: [[sum(x[i][k] * y[k][j] for k in range(len(y))) for j in range(len(y[0]))] for i in range(len(x))]
assert mul(mul(u, a), v) == d
assert [d[i][i] for i in range(3)] == [2, 6, 12]
"#);
}

#[test]
fn profiles_and_modules() {
    run(r#"
r = pk.Ring.zmod(8)
m = pk.Module.ring_module(r)
assert m.profile("lipman", [2], 4).table() == [[4, 5, 6, 7]]
assert m.profile("greenlees_may", [2], 4).table() == [[4, 5, 6, 7]]
assert m.profile("weak", [2], 2).is_conclusive()
z = pk.Ring.zmod(12)
s = pk.Module.direct_sum([pk.Module.cyclic(z, [3]), pk.Module.ideal(z, [6])])
assert s.order == 6
assert pk.Module.cyclic(z, [4]).tensor(pk.Module.cyclic(z, [6])).order == 2
"#);
}

#[test]
fn errors_raise_prokit_error() {
    run(r#"
try:
    pk.Ring.zmod(1)
except pk.ProkitError:
    pass
else:
    raise AssertionError("zmod(1) accepted")
try:
    pk.Module.ring_module(pk.Ring.zmod(4)).profile("cartier", [2])
except pk.ProkitError:
    pass
else:
    raise AssertionError("cartier profile accepted")
code, out = pk.run('{"schema": 1, "ring": {"kind": "zmod", "n": 8}, "analysis": {"kind": "profile", "sequence": [2]}}', "csv")
assert code == 0 and out.splitlines()[1] == "i,n,m,conclusive"
"#);
}
