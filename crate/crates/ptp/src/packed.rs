//! Packed code output: an 8-byte big-endian bit count, then the bits
//! MSB-first, the last byte zero-padded.

/// Packs ASCII `'0'`/`'1'` bits.
pub fn pack(bits: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + bits.len().div_ceil(8));
    out.extend_from_slice(&(bits.len() as u64).to_be_bytes());
    for chunk in bits.chunks(8) {
        let byte = chunk.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (((b == b'1') as u8) << (7 - i)));
        out.push(byte);
    }
    out
}

/// Inverse of [`pack`]. `None` on a short or inconsistent buffer.
pub fn unpack(data: &[u8]) -> Option<Vec<u8>> {
    let (header, body) = data.split_first_chunk::<8>()?;
    let n = usize::try_from(u64::from_be_bytes(*header)).ok()?;
    if body.len() != n.div_ceil(8) {
        return None;
    }
    Some((0..n).map(|i| if body[i / 8] & (0x80 >> (i % 8)) != 0 { b'1' } else { b'0' }).collect())
}
