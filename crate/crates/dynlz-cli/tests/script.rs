use dynlz::dynstr::EditOp;
use dynlz_cli::script::{parse_symbol, Command, EditScript, Query};
use dynlz_cli::workload::{generate, WorkloadKind, WorkloadParams};

fn codes(s: &str) -> Vec<u32> {
    s.bytes().map(u32::from).collect()
}

#[test]
fn parses_every_command() {
    let text = "# header\ninit \"ab#ab\"  # trailing\nI 1 x\nD 2\nS 3 7\n\nQ lzlength\nQ lzlength 3\nQ select 2\nQ contain 4\nQ recompute\n";
    let s = EditScript::parse(text).unwrap();
    assert_eq!(s.initial, codes("ab#ab"));
    let cmds: Vec<Command> = s.commands.iter().map(|l| l.command).collect();
    assert_eq!(
        cmds,
        vec![
            Command::Edit(EditOp::Insert { pos: 1, sym: 'x' as u32 }),
            Command::Edit(EditOp::Delete { pos: 2 }),
            Command::Edit(EditOp::Substitute { pos: 3, sym: 7 }),
            Command::Query(Query::LzLength { i: None }),
            Command::Query(Query::LzLength { i: Some(3) }),
            Command::Query(Query::Select { k: 2 }),
            Command::Query(Query::Contain { i: 4 }),
            Command::Query(Query::Recompute),
        ]
    );
    assert_eq!(s.commands[0].line, 3);
    assert_eq!(s.commands[3].line, 7);
}

#[test]
fn init_forms() {
    assert_eq!(EditScript::parse("init abab").unwrap().initial, codes("abab"));
    assert_eq!(EditScript::parse("init 0 1 0 1").unwrap().initial, vec![0, 1, 0, 1]);
    assert_eq!(EditScript::parse("init 12").unwrap().initial, vec![12]);
    assert_eq!(EditScript::parse("init").unwrap().initial, Vec::<u32>::new());
    assert!(EditScript::parse("").unwrap().commands.is_empty());

    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("text.txt"), "hello\n").unwrap();
    let s = EditScript::parse_in("init @text.txt\nQ recompute", Some(dir.path())).unwrap();
    assert_eq!(s.initial, codes("hello"));
}

#[test]
fn errors_carry_line_numbers() {
    for (text, line) in [
        ("init ab\nS 1\n", 2),
        ("init ab\nX 1 2\n", 2),
        ("\n\nQ nothing\n", 3),
        ("S 1 a\ninit ab\n", 2),
        ("init \"ab\n", 1),
        ("D 1 2\n", 1),
        ("I one a\n", 1),
        ("S 1 ab\n", 1),
    ] {
        let e = EditScript::parse(text).unwrap_err();
        assert_eq!(e.line, line, "{text:?}: {e}");
    }
}

#[test]
fn symbols() {
    assert_eq!(parse_symbol("7"), Some(7));
    assert_eq!(parse_symbol("c"), Some(99));
    assert_eq!(parse_symbol("cc"), None);
}

#[test]
fn printed_scripts_parse_back() {
    for kind in [WorkloadKind::Random, WorkloadKind::Periodic, WorkloadKind::AdversarialEdge] {
        for sigma in [1, 3, 40] {
            let params = WorkloadParams { kind, n: 30, steps: 40, seed: 9, sigma, query_rate: 0.5 };
            let s = generate(&params);
            let back = EditScript::parse(&s.to_string()).unwrap();
            assert_eq!(back, s, "{kind:?} sigma {sigma}");
            assert_eq!(generate(&params), s);
        }
    }
}
