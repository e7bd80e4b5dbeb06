//! Bodies as JSON lines, one record per line.

use super::ConvexBody;
use crate::error::{Error, Result};
use std::io::{BufRead, Write};

pub fn to_json(body: &ConvexBody) -> Result<String> {
    serde_json::to_string(body).map_err(|e| Error::InvalidArgument(e.to_string()))
}

pub fn from_json(line: &str) -> Result<ConvexBody> {
    let body: ConvexBody =
        serde_json::from_str(line).map_err(|e| Error::InvalidArgument(format!("bad body record: {e}")))?;
    body.validate()?;
    Ok(body)
}

pub fn write_bodies<W: Write>(mut out: W, bodies: &[ConvexBody]) -> Result<()> {
    for b in bodies {
        writeln!(out, "{}", to_json(b)?).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    Ok(())
}

/// Reads every non-blank line as a body record.
pub fn read_bodies<R: BufRead>(input: R) -> Result<Vec<ConvexBody>> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line.map_err(|e| Error::InvalidArgument(e.to_string()))?;
        if !line.trim().is_empty() {
            out.push(from_json(&line)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let bodies = vec![
            ConvexBody::ball(vec![0.1, -0.3], 1.0 / 3.0).unwrap(),
            ConvexBody::smooth_2d(vec![2.0, 0.0, 0.3], vec![0.0, 0.0, 0.1]).unwrap(),
            ConvexBody::sum(vec![
                ConvexBody::cube(2, 0.7).unwrap(),
                ConvexBody::scale(2.5, ConvexBody::segment(vec![0.0, 0.0], vec![1e-17, 3.0]).unwrap()).unwrap(),
            ])
            .unwrap(),
        ];
        let mut buf = Vec::new();
        write_bodies(&mut buf, &bodies).unwrap();
        let back = read_bodies(buf.as_slice()).unwrap();
        assert_eq!(back, bodies);
    }

    #[test]
    fn tagged_records() {
        let s = to_json(&ConvexBody::ball(vec![0.0, 0.0], 1.0).unwrap()).unwrap();
        assert!(s.contains("\"kind\":\"ball\""));
        assert!(from_json("{\"kind\":\"ball\",\"center\":[0,0],\"radius\":-1}").is_err());
    }
}
