//! PD text format: whitespace-separated `X[a,b,c,d]` tokens with an optional
//! leading `unknots=k` header.
//!
//! Without a header, a text with no crossings denotes the unknot and a text
//! with crossings has no extra circles. `unknots=0` with no crossings is the
//! empty link.

use super::{DiagramError, EdgeId, LinkDiagram};

pub fn parse_pd(text: &str) -> Result<LinkDiagram, DiagramError> {
    let mut unknots = None;
    let mut codes = Vec::new();
    for (i, token) in text.split_whitespace().enumerate() {
        if let Some(k) = token.strip_prefix("unknots=") {
            if i != 0 {
                return Err(DiagramError::MalformedToken(token.to_string()));
            }
            let k = k.parse::<usize>().map_err(|_| DiagramError::MalformedToken(token.to_string()))?;
            unknots = Some(k);
            continue;
        }
        codes.push(parse_crossing(token)?);
    }
    let unknots = unknots.unwrap_or(usize::from(codes.is_empty()));
    LinkDiagram::from_pd(codes, unknots)
}

fn parse_crossing(token: &str) -> Result<[EdgeId; 4], DiagramError> {
    let bad = || DiagramError::MalformedToken(token.to_string());
    let inner = token.strip_prefix("X[").and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
    let ids: Vec<EdgeId> =
        inner.split(',').map(|s| s.trim().parse::<EdgeId>().map_err(|_| bad())).collect::<Result<_, _>>()?;
    <[EdgeId; 4]>::try_from(ids).map_err(|_| bad())
}

pub(super) fn serialize(d: &LinkDiagram) -> String {
    let default_unknots = usize::from(d.crossings.is_empty());
    let mut parts = Vec::new();
    if d.unknots != default_unknots {
        parts.push(format!("unknots={}", d.unknots));
    }
    for x in &d.crossings {
        let [a, b, c, e] = x.edges;
        parts.push(format!("X[{a},{b},{c},{e}]"));
    }
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_defaults() {
        assert_eq!(parse_pd("").unwrap().component_count(), 1);
        assert_eq!(parse_pd("unknots=0").unwrap().component_count(), 0);
        let d = parse_pd("unknots=2 X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]").unwrap();
        assert_eq!(d.component_count(), 3);
        assert_eq!(d.to_pd_string(), "unknots=2 X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]");
    }

    #[test]
    fn malformed_tokens() {
        for bad in ["X[1,2,3]", "Y[1,2,3,4]", "X[1,2,3,a]", "X[1,-2,3,4]", "X[1,1,2,2] unknots=1", "unknots=x"] {
            assert!(matches!(parse_pd(bad), Err(DiagramError::MalformedToken(_))), "{bad}");
        }
        assert_eq!(parse_pd("X[0,0,1,1]"), Err(DiagramError::ZeroEdge));
    }

    #[test]
    fn round_trip() {
        for text in ["", "unknots=0", "unknots=3", "X[1,1,2,2]", "X[1,4,2,3] X[3,2,4,1]"] {
            let d = parse_pd(text).unwrap();
            assert_eq!(parse_pd(&d.to_pd_string()).unwrap(), d);
        }
    }
}
