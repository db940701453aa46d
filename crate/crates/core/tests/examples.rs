macro_rules! example {
    ($module:ident, $file:literal, $test:ident) => {
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(cf_algebra, "cf_algebra.rs", cf_algebra_runs);
example!(storage_fifo, "storage_fifo.rs", storage_fifo_runs);
example!(series_gradients, "series_gradients.rs", series_gradients_runs);
example!(ts1_walkthrough, "ts1_walkthrough.rs", ts1_walkthrough_runs);
example!(baseline_vs_emdp, "baseline_vs_emdp.rs", baseline_vs_emdp_runs);
example!(oracle_search, "oracle_search.rs", oracle_search_runs);
example!(validate_plan, "validate_plan.rs", validate_plan_runs);
example!(dot_export, "dot_export.rs", dot_export_runs);
example!(plan_files, "plan_files.rs", plan_files_runs);
