//! Binary greyscale PGM (`P5`, maxval 255).

use symcert_core::world::Observation;

pub fn encode(o: &Observation) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", o.width, o.height).into_bytes();
    out.extend_from_slice(&o.pixels);
    out
}

/// Reads what [`encode`] writes; comments and other maxvals are not supported.
pub fn decode(bytes: &[u8]) -> Option<Observation> {
    let mut fields = Vec::new();
    let mut at = 0;
    while fields.len() < 4 {
        while bytes.get(at)?.is_ascii_whitespace() {
            at += 1;
        }
        let start = at;
        while !bytes.get(at)?.is_ascii_whitespace() {
            at += 1;
        }
        fields.push(std::str::from_utf8(&bytes[start..at]).ok()?);
    }
    at += 1;
    if fields[0] != "P5" || fields[3] != "255" {
        return None;
    }
    let (width, height): (usize, usize) = (fields[1].parse().ok()?, fields[2].parse().ok()?);
    let pixels = bytes.get(at..)?.to_vec();
    (pixels.len() == width * height).then_some(Observation {
        width,
        height,
        pixels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use symcert_core::world::{render, GridWorldSpec, WorldState};

    #[test]
    fn round_trip() {
        let spec = GridWorldSpec::with_cell_pixels(3, 2).unwrap();
        let o = render(&spec, WorldState { x: 1, y: 2, c: 0 });
        let bytes = encode(&o);
        assert!(bytes.starts_with(b"P5\n6 6\n255\n"));
        assert_eq!(bytes.len(), 11 + 36);
        assert_eq!(decode(&bytes), Some(o));
        assert_eq!(decode(b"P2\n1 1\n255\n\0"), None);
        assert_eq!(decode(b"P5\n2 2\n255\n\0"), None);
    }
}
