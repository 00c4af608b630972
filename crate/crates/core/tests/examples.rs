// Every example is compiled into this test binary and run, so the asserts
// inside them are part of the suite.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));

            #[test]
            fn runs() {
                main().unwrap();
            }
        }
    };
}

example!(basics);
example!(marginals);
example!(ghz_family);
example!(determinedness);
example!(feasibility_search);
example!(rank_two);
example!(pure_partner);
example!(schmidt_purification);
example!(kernel);
example!(cli_pipeline);
