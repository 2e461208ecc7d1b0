//! DOT, JSON and plain-text renderings of orders.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use crate::mutation::{BoundedOrder, ClosureOrder};
use crate::poset::Order;

/// Hasse diagram drawn bottom-up, one rank group per height.
pub fn to_dot(order: &Order, heights: &BTreeMap<String, u32>) -> String {
    let mut groups: BTreeMap<u32, Vec<&str>> = BTreeMap::new();
    for p in order.elements() {
        groups.entry(heights.get(p).copied().unwrap_or(0)).or_default().push(p);
    }
    let mut out = String::from("digraph gspec {\n  rankdir=BT;\n  node [shape=circle];\n");
    for nodes in groups.values_mut() {
        nodes.sort_unstable();
        let quoted: Vec<String> = nodes.iter().map(|p| format!("\"{p}\";")).collect();
        writeln!(out, "  {{ rank=same; {} }}", quoted.join(" ")).unwrap();
    }
    let mut edges = order.hasse_edges();
    edges.sort();
    for (p, q) in edges {
        writeln!(out, "  \"{p}\" -> \"{q}\";").unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn to_text(order: &Order) -> String {
    if order.is_discrete() {
        return format!("discrete ({} isolated points)\n", order.len());
    }
    let mut out = format!(
        "{} points, {} relations, Hasse edges:\n",
        order.len(),
        order.relation_count()
    );
    for (p, q) in order.hasse_edges() {
        writeln!(out, "  {p} ⪯ {q}").unwrap();
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderJson {
    pub elements: Vec<String>,
    pub relations: Vec<(String, String)>,
    pub hasse: Vec<(String, String)>,
    pub discrete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl OrderJson {
    pub fn new(order: &Order) -> Self {
        Self {
            elements: order.elements().to_vec(),
            relations: order.relations(),
            hasse: order.hasse_edges(),
            discrete: order.is_discrete(),
            provenance: None,
        }
    }

    pub fn closure(order: &ClosureOrder) -> Self {
        Self {
            provenance: Some(order.provenance.clone()),
            ..Self::new(&order.order)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundedJson {
    pub exact: bool,
    pub lower: OrderJson,
    pub upper: OrderJson,
}

impl BoundedJson {
    pub fn new(order: &BoundedOrder) -> Self {
        Self {
            exact: order.is_exact(),
            lower: OrderJson::closure(&order.lower),
            upper: OrderJson::closure(&order.upper),
        }
    }
}

pub fn bounded_to_text(order: &BoundedOrder) -> String {
    match order.exact_order() {
        Some(o) => to_text(&o.order),
        None => format!(
            "inexact\nlower bound: {}upper bound: {}",
            to_text(&order.lower.order),
            to_text(&order.upper.order)
        ),
    }
}

/// DOT of the exact order, or of both bounds as two graphs when inexact.
pub fn bounded_to_dot(order: &BoundedOrder, heights: &BTreeMap<String, u32>) -> String {
    match order.exact_order() {
        Some(o) => to_dot(&o.order, heights),
        None => {
            let lower = to_dot(&order.lower.order, heights).replacen("digraph gspec", "digraph gspec_lower", 1);
            let upper = to_dot(&order.upper.order, heights).replacen("digraph gspec", "digraph gspec_upper", 1);
            lower + &upper
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::preset;

    #[test]
    fn dot_of_dvr() {
        let dvr = preset("DVR1").unwrap();
        let dot = to_dot(dvr.order(), dvr.heights());
        assert_eq!(
            dot,
            "digraph gspec {\n  rankdir=BT;\n  node [shape=circle];\n  { rank=same; \"o\"; }\n  { rank=same; \"m\"; }\n  \"o\" -> \"m\";\n}\n"
        );
    }

    #[test]
    fn text_forms() {
        assert_eq!(to_text(&Order::discrete(["a", "b", "c"])), "discrete (3 isolated points)\n");
        let dvr = preset("DVR1").unwrap();
        assert_eq!(to_text(dvr.order()), "2 points, 1 relations, Hasse edges:\n  o ⪯ m\n");
    }

    #[test]
    fn json_form() {
        let dvr = preset("DVR1").unwrap();
        let v = serde_json::to_value(OrderJson::new(dvr.order())).unwrap();
        assert_eq!(v["relations"], serde_json::json!([["o", "m"]]));
        assert_eq!(v["discrete"], serde_json::json!(false));
    }
}
