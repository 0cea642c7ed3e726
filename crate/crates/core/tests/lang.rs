//! Printer/parser round trip over generated syntax trees.

use proptest::prelude::*;

use vcscheck::lang::ast::*;
use vcscheck::lang::{parse_expr, parse_model, pretty_print, validate_model};

const RESERVED: &[&str] = &[
    "MODULE", "VAR", "DEFINE", "ASSIGN", "init", "next", "case", "esac", "TRUE", "FALSE", "boolean",
];

fn ident() -> impl Strategy<Value = String> {
    "[a-zA-Z_][a-zA-Z0-9_]{0,6}".prop_filter("keyword", |s| !RESERVED.contains(&s.as_str()))
}

fn e(kind: ExprKind) -> Expr {
    Expr {
        kind,
        span: Span::default(),
    }
}

fn binop() -> impl Strategy<Value = BinOp> {
    prop_oneof![
        Just(BinOp::Implies),
        Just(BinOp::Or),
        Just(BinOp::And),
        Just(BinOp::Eq),
        Just(BinOp::Ne),
        Just(BinOp::Lt),
        Just(BinOp::Le),
        Just(BinOp::Gt),
        Just(BinOp::Ge),
        Just(BinOp::Add),
        Just(BinOp::Sub),
    ]
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        any::<bool>().prop_map(|b| e(ExprKind::Bool(b))),
        (0i64..1000).prop_map(|v| e(ExprKind::Int(v))),
        prop::collection::vec(ident(), 1..=3).prop_map(|p| e(ExprKind::Ref(p))),
    ]
}

/// Expressions without set literals; those only appear at rule level.
fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 32, 4, |inner| {
        prop_oneof![
            (prop_oneof![Just(UnOp::Not), Just(UnOp::Neg)], inner.clone())
                .prop_map(|(op, a)| e(ExprKind::Unary(op, Box::new(a)))),
            (binop(), inner.clone(), inner.clone())
                .prop_map(|(op, a, b)| e(ExprKind::Binary(op, Box::new(a), Box::new(b)))),
            prop::collection::vec((inner.clone(), inner), 1..4).prop_map(|arms| {
                e(ExprKind::Case(
                    arms.into_iter()
                        .map(|(guard, value)| CaseArm {
                            guard,
                            value,
                            span: Span::default(),
                        })
                        .collect(),
                ))
            }),
        ]
    })
}

fn rule_expr() -> impl Strategy<Value = Expr> {
    prop_oneof![
        3 => expr(),
        1 => prop::collection::vec(expr(), 1..4).prop_map(|v| e(ExprKind::Set(v))),
    ]
}

fn var_type() -> impl Strategy<Value = VarType> {
    prop_oneof![
        Just(VarType::Boolean),
        prop::collection::vec(ident(), 1..4).prop_map(|s| VarType::Enum(s.into_iter().map(Ident::new).collect())),
        (leaf(), leaf()).prop_map(|(a, b)| VarType::Range(a, b)),
    ]
}

fn module() -> impl Strategy<Value = ModuleDecl> {
    (
        ident(),
        prop::collection::vec(ident(), 0..3),
        prop::collection::vec((ident(), var_type()), 0..4),
        prop::collection::vec((ident(), ident(), prop::collection::vec(expr(), 0..3)), 0..2),
        prop::collection::vec((ident(), expr()), 0..3),
        prop::collection::vec((any::<bool>(), ident(), rule_expr()), 0..4),
    )
        .prop_map(|(name, params, vars, insts, defines, assigns)| ModuleDecl {
            name: Ident::new(name),
            params: params.into_iter().map(Ident::new).collect(),
            vars: vars
                .into_iter()
                .map(|(n, ty)| VarDecl {
                    name: Ident::new(n),
                    ty,
                    span: Span::default(),
                })
                .collect(),
            instances: insts
                .into_iter()
                .map(|(n, m, args)| InstanceDecl {
                    name: Ident::new(n),
                    module: Ident::new(m),
                    args,
                    span: Span::default(),
                })
                .collect(),
            defines: defines
                .into_iter()
                .map(|(n, expr)| DefineDecl {
                    name: Ident::new(n),
                    expr,
                    span: Span::default(),
                })
                .collect(),
            assigns: assigns
                .into_iter()
                .map(|(init, t, expr)| AssignRule {
                    kind: if init { AssignKind::Init } else { AssignKind::Next },
                    target: Ident::new(t),
                    expr,
                    span: Span::default(),
                })
                .collect(),
            span: Span::default(),
        })
}

/// Module names are unique in a parsed model.
fn model() -> impl Strategy<Value = ModelAst> {
    prop::collection::vec(module(), 1..4).prop_map(|mut modules| {
        for (i, m) in modules.iter_mut().enumerate() {
            m.name.name = format!("{}_{i}", m.name.name);
        }
        ModelAst { modules }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn printed_models_reparse_equal(ast in model()) {
        let text = pretty_print(&ast);
        let back = parse_model(&text).map_err(|err| TestCaseError::fail(format!("{err}\n{text}")))?;
        prop_assert_eq!(&back, &ast, "{}", text);
        prop_assert_eq!(pretty_print(&back), text);
    }

    #[test]
    fn printed_expressions_reparse_equal(x in expr()) {
        let text = vcscheck::lang::expr_to_string(&x);
        let back = parse_expr(&text).map_err(|err| TestCaseError::fail(format!("{err}\n{text}")))?;
        prop_assert_eq!(back, x, "{}", text);
    }
}

#[test]
fn listing_round_trip_is_a_fixpoint() {
    for src in [
        include_str!("fixtures/listing1.fsm"),
        include_str!("fixtures/listing1_main.fsm"),
        include_str!("fixtures/timer.fsm"),
    ] {
        let ast = parse_model(src).unwrap();
        let once = pretty_print(&ast);
        assert_eq!(parse_model(&once).unwrap(), ast);
        assert_eq!(pretty_print(&parse_model(&once).unwrap()), once);
    }
}

#[test]
fn generated_demo_models_validate_clean() {
    use vcscheck::vcs::{generate_vcs_model, Mutant, VcsConfig};
    for cfg in [
        VcsConfig::desk(),
        VcsConfig::full(),
        VcsConfig::desk().with_mutant(Mutant::SwappedFallbackPriority),
    ] {
        let model = generate_vcs_model(&cfg).unwrap().model;
        assert_eq!(validate_model(&parse_model(&model).unwrap()), vec![]);
    }
}

#[test]
fn minimal_model_from_one_line() {
    let ast = parse_model("MODULE main VAR x : boolean;").unwrap();
    assert_eq!(ast.modules.len(), 1);
    assert_eq!(ast.modules[0].vars.len(), 1);
    assert!(ast.modules[0].assigns.is_empty());
}
