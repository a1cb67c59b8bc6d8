//! Generated syntax is well formed, printable and reproducible.

use rlv_core::formula::assertion_check;
use rlv_core::parser::{parse_assertion, parse_command, parse_module, pretty_print, print_assertion, print_command};
use rlv_core::testkit::{gen_corpus, GenConfig, Generator};

#[test]
fn thousand_commands_round_trip() {
    let mut g = Generator::new(GenConfig {
        allow_loops: true,
        allow_calls: true,
        ..GenConfig::default().with_seed(11)
    });
    for _ in 0..1000 {
        let c = g.command();
        let text = print_command(&c);
        assert_eq!(parse_command(&text).unwrap(), c, "{text}");
    }
}

#[test]
fn thousand_assertions_are_well_scoped_and_round_trip() {
    let mut g = Generator::new(GenConfig::default().with_seed(12));
    for i in 0..1000 {
        let arity = 1 + i % 3;
        let a = g.assertion(arity);
        assert!(assertion_check(&a).is_ok());
        assert!(a.is_quantifier_free());
        let text = print_assertion(&a);
        assert_eq!(parse_assertion(&text, arity).unwrap(), a, "{text}");
    }
}

#[test]
fn corpus_is_reproducible_and_parses() {
    let cfg = GenConfig {
        allow_calls: true,
        ..GenConfig::default().with_seed(5)
    };
    let a = pretty_print(&gen_corpus(&cfg, 20, 9, 1000));
    let b = pretty_print(&gen_corpus(&cfg, 20, 9, 1000));
    assert_eq!(a, b);
    let m = parse_module(&a).unwrap();
    assert_eq!(m, gen_corpus(&cfg, 20, 9, 1000));
    let c = pretty_print(&gen_corpus(&cfg.clone().with_seed(6), 20, 9, 1000));
    assert_ne!(a, c);
}

#[test]
fn generated_addresses_are_bounded() {
    let cfg = GenConfig {
        max_addr: 3,
        ..GenConfig::default().with_seed(3)
    };
    let mut g = Generator::new(cfg);
    for _ in 0..200 {
        let text = print_command(&g.command());
        for word in text.split(|ch: char| !ch.is_ascii_alphanumeric()) {
            if let Some(n) = word.strip_prefix('x') {
                let n: u64 = n.parse().unwrap();
                assert!((1..=3).contains(&n), "{text}");
            }
        }
    }
}
