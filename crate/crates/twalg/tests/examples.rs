macro_rules! examples {
    ($($name:ident),* $(,)?) => {$(
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));

            #[test]
            fn runs() {
                run_example().unwrap();
            }
        }
    )*};
}

examples!(
    cli_report,
    composition_product,
    dsl_roundtrip,
    filtrations,
    free_algebras,
    hom_algebras,
    imposition,
    kunneth,
    lifted_functors,
    presentations,
    tall_wraith_monoid,
);
