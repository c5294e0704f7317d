//! Surface and point inputs: builtin names, DSL strings, JSON files.

use anyhow::{anyhow, bail, Context, Result};
use crcartan::expr::{parse_expr, Expr, Point, Var};
use serde_json::Value;

/// Resolve `--surface`: a builtin name, a DSL expression, or `@file.json`.
pub fn resolve_surface(spec: &str) -> Result<(Expr, String)> {
    if let Some(graph) = crcartan::model::builtin_surface(spec) {
        return Ok((graph, spec.to_string()));
    }
    if let Some(path) = spec.strip_prefix('@') {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {path}"))?;
        let graph = surface_from_json(&value)?;
        return Ok((graph, format!("@{path}")));
    }
    let graph = parse_expr(spec).map_err(|e| anyhow!("surface expression: {e}"))?;
    Ok((graph, spec.to_string()))
}

/// JSON surface document: either `{"dsl": "..."}` or `{"ast": <node>}` with
/// nodes `{"const": "rational-or-complex"}`, `{"var": "z1"}`,
/// `{"sum": [...]}`, `{"product": [...]}`,
/// `{"pow": {"base": <node>, "exp": n}}`, `{"neg": <node>}`.
pub fn surface_from_json(value: &Value) -> Result<Expr> {
    let obj = value.as_object().ok_or_else(|| anyhow!("surface file must be a JSON object"))?;
    if let Some(dsl) = obj.get("dsl") {
        let text = dsl.as_str().ok_or_else(|| anyhow!("\"dsl\" must be a string"))?;
        return parse_expr(text).map_err(|e| anyhow!("surface expression: {e}"));
    }
    if let Some(ast) = obj.get("ast") {
        return expr_from_ast(ast);
    }
    bail!("surface file needs a \"dsl\" or \"ast\" field")
}

fn expr_from_ast(node: &Value) -> Result<Expr> {
    let obj = node.as_object().ok_or_else(|| anyhow!("AST node must be an object"))?;
    let (kind, payload) = obj.iter().next().ok_or_else(|| anyhow!("empty AST node"))?;
    match kind.as_str() {
        "const" => {
            let text = payload.as_str().ok_or_else(|| anyhow!("\"const\" must be a string"))?;
            let e = parse_expr(text).map_err(|err| anyhow!("constant `{text}`: {err}"))?;
            if e.is_const().is_none() {
                bail!("`{text}` is not a constant");
            }
            Ok(e)
        }
        "var" => {
            let name = payload.as_str().ok_or_else(|| anyhow!("\"var\" must be a string"))?;
            Var::from_dsl_name(name)
                .map(Expr::var)
                .ok_or_else(|| anyhow!("unknown variable `{name}`"))
        }
        "sum" | "product" => {
            let items = payload.as_array().ok_or_else(|| anyhow!("\"{kind}\" must be a list"))?;
            let children: Result<Vec<Expr>> = items.iter().map(expr_from_ast).collect();
            let children = children?;
            Ok(if kind == "sum" { Expr::sum(children) } else { Expr::product(children) })
        }
        "pow" => {
            let inner =
                payload.as_object().ok_or_else(|| anyhow!("\"pow\" must be an object"))?;
            let base = inner.get("base").ok_or_else(|| anyhow!("\"pow\" needs a base"))?;
            let exp = inner
                .get("exp")
                .and_then(Value::as_i64)
                .ok_or_else(|| anyhow!("\"pow\" needs an integer exp"))?;
            if exp == 0 {
                bail!("zero exponent");
            }
            Ok(Expr::pow(expr_from_ast(base)?, i32::try_from(exp)?))
        }
        "neg" => Ok(Expr::neg(expr_from_ast(payload)?)),
        other => bail!("unknown AST node kind `{other}`"),
    }
}

/// Points file: a JSON list of objects mapping variable names to constant
/// expressions, e.g. `[{"z1": "1/2 + 1/3*i", "z2": "0"}]`. Conjugate
/// variables are filled in automatically when omitted.
pub fn points_from_file(path: &str) -> Result<Vec<Point>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {path}"))?;
    let list = value.as_array().ok_or_else(|| anyhow!("points file must be a JSON list"))?;
    let mut out = Vec::new();
    for (idx, entry) in list.iter().enumerate() {
        let obj = entry
            .as_object()
            .ok_or_else(|| anyhow!("point {idx} must be an object"))?;
        let mut p = Point::new();
        for (name, val) in obj {
            let var = Var::from_dsl_name(name)
                .ok_or_else(|| anyhow!("point {idx}: unknown variable `{name}`"))?;
            let text = val
                .as_str()
                .ok_or_else(|| anyhow!("point {idx}: `{name}` must be a string"))?;
            let e = parse_expr(text).map_err(|err| anyhow!("point {idx}: `{text}`: {err}"))?;
            let c = e
                .is_const()
                .ok_or_else(|| anyhow!("point {idx}: `{text}` is not a constant"))?
                .clone();
            if p.get(var.partner()).is_none() || var.partner() == var {
                p.set_conj_pair(var, c);
            } else {
                p.set_raw(var, c);
            }
        }
        if !p.is_conj_consistent() {
            bail!("point {idx} is not conjugate-consistent");
        }
        out.push(p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_and_dsl_surfaces() {
        assert!(resolve_surface("mlc").is_ok());
        assert!(resolve_surface("z1*zb1 + z2*zb2").is_ok());
        assert!(resolve_surface("z1*(").is_err());
    }

    #[test]
    fn ast_round_trip() {
        let doc: Value = serde_json::from_str(
            r#"{"ast": {"product": [{"var": "z1"}, {"var": "zb1"}]}}"#,
        )
        .unwrap();
        let e = surface_from_json(&doc).unwrap();
        let direct = parse_expr("z1*zb1").unwrap();
        assert!(e == direct);
    }
}
