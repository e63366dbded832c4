use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive};

use super::rational::{format_rational, Rational};
use super::subset::Subset;
use crate::error::{Error, Result};

/// An ordered, finite set of integer parameter labels.
///
/// The construction order fixes the index of each label; every subset of
/// the frame is expressed in those indices.
#[derive(Clone)]
pub struct Frame {
    labels: Vec<i64>,
    index: HashMap<i64, usize>,
}

impl Frame {
    pub fn new(labels: Vec<i64>) -> Result<Arc<Frame>> {
        if labels.is_empty() {
            return Err(Error::InvalidFrame("frame must not be empty".into()));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, &label) in labels.iter().enumerate() {
            if index.insert(label, i).is_some() {
                return Err(Error::InvalidFrame(format!("duplicate label {label}")));
            }
        }
        Ok(Arc::new(Frame { labels, index }))
    }

    /// The frame `{lo, lo+1, ..., hi}`.
    pub fn range(lo: i64, hi: i64) -> Result<Arc<Frame>> {
        if lo > hi {
            return Err(Error::InvalidFrame(format!("empty range [{lo}..{hi}]")));
        }
        Frame::new((lo..=hi).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> i64 {
        self.labels[index]
    }

    pub fn index_of(&self, label: i64) -> Option<usize> {
        self.index.get(&label).copied()
    }

    pub fn require_index(&self, label: i64) -> Result<usize> {
        self.index_of(label).ok_or(Error::UnknownLabel(label))
    }

    /// `Some(n)` when the frame is exactly `{0, 1, ..., n}` in that order.
    pub fn as_zero_based_range(&self) -> Option<i64> {
        let n = self.labels.len() as i64 - 1;
        self.labels.iter().enumerate().all(|(i, &l)| l == i as i64).then_some(n)
    }
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Eq for Frame {}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Frame{:?}", self.labels)
    }
}

pub(crate) fn same_frame(a: &Arc<Frame>, b: &Arc<Frame>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::FrameMismatch)
    }
}

/// A subset of a frame. Simple when it has one member, composite when more.
#[derive(Clone, PartialEq, Eq)]
pub struct Hypothesis {
    frame: Arc<Frame>,
    members: Subset,
}

impl Hypothesis {
    pub fn from_subset(frame: &Arc<Frame>, members: Subset) -> Self {
        assert_eq!(members.universe(), frame.len(), "subset universe differs from frame size");
        Hypothesis { frame: Arc::clone(frame), members }
    }

    pub fn from_labels(frame: &Arc<Frame>, labels: impl IntoIterator<Item = i64>) -> Result<Self> {
        let mut members = Subset::empty(frame.len());
        for label in labels {
            members.insert(frame.require_index(label)?);
        }
        Ok(Hypothesis::from_subset(frame, members))
    }

    pub fn singleton(frame: &Arc<Frame>, label: i64) -> Result<Self> {
        Self::from_labels(frame, [label])
    }

    pub fn whole(frame: &Arc<Frame>) -> Self {
        Hypothesis::from_subset(frame, Subset::full(frame.len()))
    }

    pub fn empty(frame: &Arc<Frame>) -> Self {
        Hypothesis::from_subset(frame, Subset::empty(frame.len()))
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn members(&self) -> &Subset {
        &self.members
    }

    pub fn labels(&self) -> Vec<i64> {
        self.members.iter().map(|i| self.frame.label(i)).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_simple(&self) -> bool {
        self.len() == 1
    }

    pub fn is_composite(&self) -> bool {
        self.len() > 1
    }

    pub fn complement(&self) -> Hypothesis {
        Hypothesis { frame: Arc::clone(&self.frame), members: self.members.complement() }
    }

    pub fn is_subset_of(&self, other: &Hypothesis) -> Result<bool> {
        same_frame(&self.frame, &other.frame)?;
        Ok(self.members.is_subset(&other.members))
    }
}

impl fmt::Debug for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.labels()).finish()
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_labels(&self.labels()))
    }
}

/// `[lo..hi]` for a run of consecutive integers, `{a,b,...}` otherwise.
pub fn render_labels(labels: &[i64]) -> String {
    let contiguous = !labels.is_empty() && labels.windows(2).all(|w| w[1] == w[0] + 1);
    if contiguous {
        format!("[{}..{}]", labels[0], labels[labels.len() - 1])
    } else {
        let parts: Vec<String> = labels.iter().map(i64::to_string).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// All labels `l` of the frame with `lo <= l <= hi`. Both bounds must
/// themselves be labels of the frame; nothing is clamped.
pub fn make_interval_hypothesis(frame: &Arc<Frame>, lo: i64, hi: i64) -> Result<Hypothesis> {
    for bound in [lo, hi] {
        if frame.index_of(bound).is_none() {
            return Err(Error::BoundOutsideFrame(bound));
        }
    }
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty interval [{lo}..{hi}]")));
    }
    let members = frame.labels().iter().enumerate().filter(|(_, &l)| lo <= l && l <= hi).map(|(i, _)| i);
    Ok(Hypothesis::from_subset(frame, Subset::from_indices(frame.len(), members)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateDirection {
    AtLeast,
    Exactly,
}

/// `{θ : θ >= rate·N}` or `{rate·N}` on the frame `{0..N}`.
pub fn make_rate_hypothesis(frame: &Arc<Frame>, rate: &Rational, direction: RateDirection) -> Result<Hypothesis> {
    let n = frame
        .as_zero_based_range()
        .ok_or_else(|| Error::InvalidFrame("rate hypotheses need a frame {0..N}".into()))?;
    if rate.is_negative() || *rate > Rational::one() {
        return Err(Error::RateOutOfRange(format_rational(rate)));
    }
    let scaled = rate * Rational::from_integer(n.into());
    if !scaled.denom().is_one() {
        return Err(Error::RateMisaligned { rate: format_rational(rate), size: n });
    }
    let threshold = scaled.to_integer().to_i64().expect("threshold within frame");
    match direction {
        RateDirection::AtLeast => make_interval_hypothesis(frame, threshold, n),
        RateDirection::Exactly => Hypothesis::singleton(frame, threshold),
    }
}

/// The `d` such that `rate * N` is an integer exactly when `d` divides `N`.
pub fn rate_alignment(rate: &Rational) -> i64 {
    rate.denom().to_i64().unwrap_or(i64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::rational::ratio;

    #[test]
    fn frame_rejects_duplicates_and_empty() {
        assert!(Frame::new(vec![]).is_err());
        assert!(matches!(Frame::new(vec![1, 2, 1]), Err(Error::InvalidFrame(_))));
        assert_eq!(Frame::range(0, 4).unwrap().as_zero_based_range(), Some(4));
        assert_eq!(Frame::new(vec![1, 2]).unwrap().as_zero_based_range(), None);
    }

    #[test]
    fn interval_hypotheses() {
        let f = Frame::range(0, 4).unwrap();
        assert_eq!(make_interval_hypothesis(&f, 1, 2).unwrap().labels(), vec![1, 2]);
        let h = make_interval_hypothesis(&f, 3, 3).unwrap();
        assert!(h.is_simple());
        assert_eq!(h.labels(), vec![3]);
        assert_eq!(make_interval_hypothesis(&f, 0, 4).unwrap(), Hypothesis::whole(&f));
        assert_eq!(make_interval_hypothesis(&f, 2, 5), Err(Error::BoundOutsideFrame(5)));
        assert_eq!(make_interval_hypothesis(&f, -1, 2), Err(Error::BoundOutsideFrame(-1)));
    }

    #[test]
    fn rate_hypotheses_on_survival_frame() {
        let f = Frame::range(0, 250).unwrap();
        let h2 = make_rate_hypothesis(&f, &ratio(4, 5), RateDirection::AtLeast).unwrap();
        assert_eq!(h2, make_interval_hypothesis(&f, 200, 250).unwrap());
        assert_eq!(h2.len(), 51);
        let h1 = make_rate_hypothesis(&f, &ratio(1, 5), RateDirection::Exactly).unwrap();
        assert_eq!(h1.labels(), vec![50]);

        let f10 = Frame::range(0, 10).unwrap();
        assert!(matches!(
            make_rate_hypothesis(&f10, &ratio(1, 3), RateDirection::AtLeast),
            Err(Error::RateMisaligned { .. })
        ));
        assert!(matches!(
            make_rate_hypothesis(&f10, &ratio(3, 2), RateDirection::AtLeast),
            Err(Error::RateOutOfRange(_))
        ));
        let err = make_rate_hypothesis(&f10, &ratio(1, 3), RateDirection::AtLeast).unwrap_err();
        assert!(err.to_string().contains("rate does not align with frame"));
    }

    #[test]
    fn cross_frame_comparison_is_an_error() {
        let a = Frame::range(0, 4).unwrap();
        let b = Frame::range(0, 5).unwrap();
        let ha = Hypothesis::whole(&a);
        let hb = Hypothesis::whole(&b);
        assert_eq!(ha.is_subset_of(&hb), Err(Error::FrameMismatch));
        // structurally equal frames built separately are compatible
        let a2 = Frame::range(0, 4).unwrap();
        assert_eq!(ha.is_subset_of(&Hypothesis::whole(&a2)), Ok(true));
    }

    #[test]
    fn rendering() {
        assert_eq!(render_labels(&[1, 2, 3]), "[1..3]");
        assert_eq!(render_labels(&[4]), "[4..4]");
        assert_eq!(render_labels(&[1, 4]), "{1,4}");
        assert_eq!(render_labels(&[]), "{}");
    }
}
