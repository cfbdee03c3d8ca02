macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }
    };
}

example!(field_arithmetic);
example!(derivatives);
example!(rank_factorization);
example!(kernel_probe);
example!(decompose_w);
example!(inequality_audit);
example!(corpus_sweep);

#[test]
fn examples_run() {
    field_arithmetic::run().unwrap();
    derivatives::run().unwrap();
    rank_factorization::run().unwrap();
    kernel_probe::run().unwrap();
    decompose_w::run().unwrap();
    inequality_audit::run().unwrap();
    corpus_sweep::run().unwrap();
}
