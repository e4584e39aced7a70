use serde::{Deserialize, Serialize};

/// Axis-aligned pixel rectangle, closed on the left/top and open on the
/// right/bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub left: i32,
    pub top: i32,
    pub width: u32,
    pub height: u32,
}

impl Rect {
    pub const fn new(left: i32, top: i32, width: u32, height: u32) -> Rect {
        Rect {
            left,
            top,
            width,
            height,
        }
    }

    pub fn right(&self) -> i32 {
        self.left + self.width as i32
    }

    pub fn bottom(&self) -> i32 {
        self.top + self.height as i32
    }

    pub fn contains(&self, x: i32, y: i32) -> bool {
        x >= self.left && x < self.right() && y >= self.top && y < self.bottom()
    }

    /// Integer center; always inside a non-empty rectangle.
    pub fn center(&self) -> (i32, i32) {
        (
            self.left + (self.width as i32 - 1) / 2,
            self.top + (self.height as i32 - 1) / 2,
        )
    }

    pub fn area(&self) -> u64 {
        u64::from(self.width) * u64::from(self.height)
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        self.left < other.right()
            && other.left < self.right()
            && self.top < other.bottom()
            && other.top < self.bottom()
    }

    pub fn inset(&self, by: u32) -> Rect {
        let w = self.width.saturating_sub(2 * by);
        let h = self.height.saturating_sub(2 * by);
        Rect::new(self.left + by as i32, self.top + by as i32, w, h)
    }

    pub fn union(&self, other: &Rect) -> Rect {
        let left = self.left.min(other.left);
        let top = self.top.min(other.top);
        let right = self.right().max(other.right());
        let bottom = self.bottom().max(other.bottom());
        Rect::new(left, top, (right - left) as u32, (bottom - top) as u32)
    }

    pub fn inside(&self, viewport: Viewport) -> bool {
        self.left >= 0
            && self.top >= 0
            && self.right() <= viewport.width as i32
            && self.bottom() <= viewport.height as i32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Viewport {
    pub width: u32,
    pub height: u32,
}

impl Viewport {
    pub const MIN: Viewport = Viewport {
        width: 640,
        height: 480,
    };

    /// Default screenshot size; every catalog page fits it in every theme.
    pub const DEFAULT: Viewport = Viewport {
        width: 1280,
        height: 960,
    };

    pub const fn new(width: u32, height: u32) -> Viewport {
        Viewport { width, height }
    }

    pub fn admits_minimum(&self) -> bool {
        self.width >= Self::MIN.width && self.height >= Self::MIN.height
    }

    pub fn area(&self) -> u64 {
        u64::from(self.width) * u64::from(self.height)
    }
}

impl std::fmt::Display for Viewport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

impl std::str::FromStr for Viewport {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (w, h) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("viewport `{s}` is not WIDTHxHEIGHT"))?;
        let width = w
            .trim()
            .parse()
            .map_err(|_| format!("bad viewport width in `{s}`"))?;
        let height = h
            .trim()
            .parse()
            .map_err(|_| format!("bad viewport height in `{s}`"))?;
        Ok(Viewport { width, height })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contains_is_half_open() {
        let r = Rect::new(10, 20, 5, 4);
        assert!(r.contains(10, 20));
        assert!(r.contains(14, 23));
        assert!(!r.contains(15, 20));
        assert!(!r.contains(10, 24));
        assert!(!r.contains(9, 21));
        assert!(r.contains(r.center().0, r.center().1));
    }

    #[test]
    fn abutting_rects_do_not_intersect() {
        let a = Rect::new(0, 0, 10, 10);
        let b = Rect::new(10, 0, 10, 10);
        assert!(!a.intersects(&b));
        assert!(a.intersects(&Rect::new(9, 9, 2, 2)));
    }

    #[test]
    fn viewport_parses() {
        assert_eq!(
            "1280x960".parse::<Viewport>().unwrap(),
            Viewport::new(1280, 960)
        );
        assert!("1280".parse::<Viewport>().is_err());
    }
}
