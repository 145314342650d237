use super::stats::Recorder;
use super::text;
use super::{
    group_occurrences, window_count, BackendKind, Cluster, IndexConfig, IndexStats, Phase, Primitive, Progression,
    Span, StringIndex,
};
use crate::dynstr::{DynString, EditOp, EditReceipt, Symbol};
use crate::error::{Error, Result};

/// Reference backend: every query scans a plain copy of the string.
#[derive(Clone, Debug)]
pub struct NaiveIndex {
    ds: DynString,
    s: Vec<Symbol>,
    rec: Recorder,
}

impl NaiveIndex {
    fn slice(&self, r: Span) -> &[Symbol] {
        &self.s[r.start - 1..r.end]
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.s
    }
}

impl StringIndex for NaiveIndex {
    fn build(symbols: &[Symbol], config: &IndexConfig) -> Result<Self> {
        Ok(NaiveIndex { ds: DynString::from_symbols(symbols, config.seed)?, s: symbols.to_vec(), rec: Recorder::default() })
    }

    fn kind(&self) -> BackendKind {
        BackendKind::Naive
    }

    fn dynstr(&self) -> &DynString {
        &self.ds
    }

    fn apply(&mut self, op: &EditOp) -> Result<EditReceipt> {
        let receipt = self.ds.apply(op)?;
        op.apply_to_vec(&mut self.s);
        Ok(receipt)
    }

    fn lcp(&self, i: usize, j: usize) -> Result<usize> {
        self.rec.bump(Primitive::Lcp);
        let n = self.s.len();
        for x in [i, j] {
            if x == 0 || x > n {
                return Err(Error::OutOfRange { pos: x, len: n });
            }
        }
        Ok(self.s[i - 1..].iter().zip(&self.s[j - 1..]).take_while(|(a, b)| a == b).count())
    }

    fn lcs(&self, i: usize, j: usize) -> Result<usize> {
        self.rec.bump(Primitive::Lcs);
        let n = self.s.len();
        for x in [i, j] {
            if x == 0 || x > n {
                return Err(Error::OutOfRange { pos: x, len: n });
            }
        }
        Ok(self.s[..i].iter().rev().zip(self.s[..j].iter().rev()).take_while(|(a, b)| a == b).count())
    }

    fn ipm(&self, pattern: Span, text_span: Span) -> Result<Vec<Progression>> {
        self.rec.bump(Primitive::Ipm);
        let n = self.s.len();
        pattern.check_pattern(n)?;
        text_span.check(n)?;
        if text_span.len() > 2 * pattern.len() {
            return Err(Error::TextTooLong { pattern: pattern.len(), text: text_span.len() });
        }
        let p = self.slice(pattern);
        let occ: Vec<usize> =
            text::find_all(p, self.slice(text_span)).into_iter().map(|x| x + text_span.start).collect();
        if occ.is_empty() {
            return Ok(Vec::new());
        }
        Ok(group_occurrences(&occ, text::period(p)))
    }

    fn clusters(&self, pattern: Span, text_span: Span) -> Result<Vec<Cluster>> {
        self.rec.bump(Primitive::Clusters);
        let n = self.s.len();
        pattern.check_pattern(n)?;
        text_span.check(n)?;
        self.rec.bump_by(Primitive::ClusterWindows, window_count(pattern.len(), text_span.len()) as u64);
        let p = self.slice(pattern);
        let occ: Vec<usize> =
            text::find_all(p, self.slice(text_span)).into_iter().map(|x| x + text_span.start).collect();
        let per = text::period(p);
        Ok(group_occurrences(&occ, per).into_iter().map(|g| Cluster { a: g.first, b: g.last, p: per }).collect())
    }

    fn exists(&self, pattern: Span, text_span: Span) -> Result<bool> {
        self.rec.bump(Primitive::Exists);
        let n = self.s.len();
        pattern.check_pattern(n)?;
        text_span.check(n)?;
        Ok(text::find_first(self.slice(pattern), self.slice(text_span)).is_some())
    }

    fn first_occ(&self, pattern: Span, text_span: Span) -> Result<Option<usize>> {
        self.rec.bump(Primitive::FirstOcc);
        let n = self.s.len();
        pattern.check_pattern(n)?;
        text_span.check(n)?;
        Ok(text::find_first(self.slice(pattern), self.slice(text_span)).map(|x| x + text_span.start))
    }

    fn last_occ(&self, pattern: Span, text_span: Span) -> Result<Option<usize>> {
        self.rec.bump(Primitive::LastOcc);
        let n = self.s.len();
        pattern.check_pattern(n)?;
        text_span.check(n)?;
        Ok(text::find_last(self.slice(pattern), self.slice(text_span)).map(|x| x + text_span.start))
    }

    fn period(&self, pattern: Span) -> Result<usize> {
        self.rec.bump(Primitive::Period);
        pattern.check_pattern(self.s.len())?;
        Ok(text::period(self.slice(pattern)))
    }

    fn stats(&self) -> IndexStats {
        self.rec.snapshot()
    }

    fn reset_stats(&self) {
        self.rec.reset();
    }

    fn set_phase(&self, phase: Phase) {
        self.rec.set_phase(phase);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(s: &str) -> NaiveIndex {
        NaiveIndex::build(&s.bytes().map(u32::from).collect::<Vec<_>>(), &IndexConfig::default()).unwrap()
    }

    #[test]
    fn lcp_examples() {
        let s = idx("abab");
        assert_eq!(s.lcp(1, 3).unwrap(), 2);
        assert_eq!(s.lcp(2, 2).unwrap(), 3);
        assert_eq!(idx("aaaa").lcp(1, 2).unwrap(), 3);
    }

    #[test]
    fn ipm_examples() {
        let s = idx("aaaa");
        assert_eq!(s.ipm(Span::new(1, 2), Span::new(1, 4)).unwrap(), vec![Progression { first: 1, last: 3, step: 1 }]);
        let s = idx("abcd");
        assert!(s.ipm(Span::new(1, 2), Span::new(3, 4)).unwrap().is_empty());
        assert!(s.ipm(Span::new(1, 1), Span::new(1, 4)).is_err());
    }

    #[test]
    fn cluster_examples() {
        let s = idx("aaaaa");
        assert_eq!(s.clusters(Span::new(1, 2), Span::new(1, 5)).unwrap(), vec![Cluster { a: 1, b: 4, p: 1 }]);
        // per("aba") = 2, so occurrences three apart never share a cluster.
        let s = idx("abaabaaba");
        assert_eq!(
            s.clusters(Span::new(1, 3), Span::new(1, 9)).unwrap(),
            vec![Cluster { a: 1, b: 1, p: 2 }, Cluster { a: 4, b: 4, p: 2 }, Cluster { a: 7, b: 7, p: 2 }]
        );
        let s = idx("abababab");
        assert_eq!(s.clusters(Span::new(1, 3), Span::new(1, 8)).unwrap(), vec![Cluster { a: 1, b: 5, p: 2 }]);
    }

    #[test]
    fn occurrence_examples() {
        let s = idx("abcab");
        assert!(s.exists(Span::new(1, 2), Span::new(3, 5)).unwrap());
        assert!(!s.exists(Span::new(1, 3), Span::new(4, 5)).unwrap());
        assert_eq!(s.first_occ(Span::new(4, 5), Span::new(1, 5)).unwrap(), Some(1));
        assert_eq!(s.last_occ(Span::new(4, 5), Span::new(1, 5)).unwrap(), Some(4));
        assert!(s.exists(Span::new(1, 0), Span::new(1, 5)).is_err());
    }
}
