// Runs every example so they stay in sync with the library.

mod clear_denominators {
    include!("../examples/clear_denominators.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod compile_network {
    include!("../examples/compile_network.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod depth_bounds {
    include!("../examples/depth_bounds.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod ehrhart {
    include!("../examples/ehrhart.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod face_recursion {
    include!("../examples/face_recursion.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod max_network {
    include!("../examples/max_network.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod mixed_volume {
    include!("../examples/mixed_volume.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod modular_checks {
    include!("../examples/modular_checks.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod refute_network {
    include!("../examples/refute_network.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod su_invariant {
    include!("../examples/su_invariant.rs");

    #[test]
    fn runs() {
        main();
    }
}

mod volumes {
    include!("../examples/volumes.rs");

    #[test]
    fn runs() {
        main();
    }
}
