use super::{SeriesError, TruncatedSeries, Word};
use crate::coeffring::Ring;
use crate::par::{self, Exec};

/// An algebra that series can be substituted into.
pub trait SubstTarget: Clone + Send + Sync {
    type Scalar;
    fn unit_like(&self) -> Self;
    fn zero_like(&self) -> Self;
    fn cap(&self) -> usize;
    fn constant_is_zero(&self) -> bool;
    fn is_zero(&self) -> bool;
    fn compatible(&self, o: &Self) -> bool;
    fn mul(&self, o: &Self) -> Self;
    /// self += c·o
    fn add_scaled(&mut self, o: &Self, c: &Self::Scalar);
    fn add_assign(&mut self, o: &Self);
}

impl<R: Ring> SubstTarget for TruncatedSeries<R> {
    type Scalar = R::Elem;
    fn unit_like(&self) -> Self {
        TruncatedSeries::one(self.ring().clone(), self.alphabet().clone(), self.cap())
    }
    fn zero_like(&self) -> Self {
        TruncatedSeries::zero(self.ring().clone(), self.alphabet().clone(), self.cap())
    }
    fn cap(&self) -> usize {
        TruncatedSeries::cap(self)
    }
    fn constant_is_zero(&self) -> bool {
        self.ring().is_zero(&self.constant())
    }
    fn is_zero(&self) -> bool {
        TruncatedSeries::is_zero(self)
    }
    fn compatible(&self, o: &Self) -> bool {
        self.check_compatible(o).is_ok()
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_unchecked(Exec::Sequential, o)
    }
    fn add_scaled(&mut self, o: &Self, c: &R::Elem) {
        for (w, x) in o.terms() {
            let y = self.ring().mul(c, x);
            self.add_term(w.clone(), y);
        }
    }
    fn add_assign(&mut self, o: &Self) {
        for (w, x) in o.terms() {
            self.add_term(w.clone(), x.clone());
        }
    }
}

impl<R: Ring> TruncatedSeries<R> {
    /// Replaces letter i by images[i] and extends multiplicatively.
    pub fn substitute<T: SubstTarget<Scalar = R::Elem>>(&self, images: &[T]) -> Result<T, SeriesError> {
        self.substitute_with(Exec::default(), images)
    }

    pub fn substitute_with<T: SubstTarget<Scalar = R::Elem>>(
        &self,
        exec: Exec,
        images: &[T],
    ) -> Result<T, SeriesError> {
        if images.len() != self.alphabet().len() {
            return Err(SeriesError::Mismatch(format!(
                "{} images for {} letters",
                images.len(),
                self.alphabet().len()
            )));
        }
        if images.iter().any(|t| !t.compatible(&images[0])) {
            return Err(SeriesError::Mismatch("images live in different algebras".into()));
        }
        if let Some(i) = images.iter().position(|t| !t.constant_is_zero()) {
            return Err(SeriesError::Domain(format!("image of letter {i} has a nonzero constant term")));
        }
        if images[0].cap() > self.cap() {
            return Err(SeriesError::Mismatch(format!(
                "target cap {} exceeds source cap {}",
                images[0].cap(),
                self.cap()
            )));
        }
        // lexicographic order groups words sharing a prefix together
        let mut terms: Vec<(&Word, &R::Elem)> = self.terms().iter().collect();
        terms.sort_by(|a, b| a.0.as_slice().cmp(b.0.as_slice()));
        let unit = images[0].unit_like();
        let groups = split_by_letter(&terms, 0);
        let mut out = images[0].zero_like();
        // the empty word, if present, sorts first
        if let Some((w, c)) = terms.first() {
            if w.is_empty() {
                out.add_scaled(&unit, c);
            }
        }
        let parts = par::map(exec, &groups, |&(l, lo, hi)| {
            let mut acc = images[0].zero_like();
            let prefix = unit.mul(&images[l as usize]);
            walk(&terms[lo..hi], 1, &prefix, images, &mut acc);
            acc
        });
        for p in parts {
            out.add_assign(&p);
        }
        Ok(out)
    }
}

fn split_by_letter<E>(terms: &[(&Word, &E)], depth: usize) -> Vec<(u8, usize, usize)> {
    let mut groups = Vec::new();
    let mut i = 0;
    while i < terms.len() {
        if terms[i].0.len() <= depth {
            i += 1;
            continue;
        }
        let l = terms[i].0.as_slice()[depth];
        let mut j = i;
        while j < terms.len() && terms[j].0.len() > depth && terms[j].0.as_slice()[depth] == l {
            j += 1;
        }
        groups.push((l, i, j));
        i = j;
    }
    groups
}

fn walk<T: SubstTarget>(terms: &[(&Word, &T::Scalar)], depth: usize, prefix: &T, images: &[T], acc: &mut T) {
    if prefix.is_zero() {
        return;
    }
    for (_, c) in terms.iter().take_while(|(w, _)| w.len() == depth) {
        acc.add_scaled(prefix, c);
    }
    for (l, lo, hi) in split_by_letter(terms, depth) {
        let next = prefix.mul(&images[l as usize]);
        walk(&terms[lo..hi], depth + 1, &next, images, acc);
    }
}
