use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const MINUTES_PER_DAY: u16 = 1440;

/// Minute of the (JST) day, `00:00` through `23:59`.
///
/// Values outside `[0, 1439]` cannot be constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Minute(u16);

impl Minute {
    pub const MIDNIGHT: Minute = Minute(0);

    pub const fn new(index: u16) -> Option<Self> {
        if index < MINUTES_PER_DAY {
            Some(Minute(index))
        } else {
            None
        }
    }

    pub const fn hm(hour: u16, minute: u16) -> Option<Self> {
        if hour < 24 && minute < 60 {
            Some(Minute(hour * 60 + minute))
        } else {
            None
        }
    }

    /// Compile-time constructor for well-known clock times.
    pub const fn at(hour: u16, minute: u16) -> Self {
        match Self::hm(hour, minute) {
            Some(m) => m,
            None => panic!("clock time out of range"),
        }
    }

    pub const fn index(self) -> u16 {
        self.0
    }

    pub const fn hour(self) -> u16 {
        self.0 / 60
    }

    pub const fn minute(self) -> u16 {
        self.0 % 60
    }

    pub fn checked_add(self, minutes: u16) -> Option<Self> {
        self.0.checked_add(minutes).and_then(Self::new)
    }

    pub fn checked_sub(self, minutes: u16) -> Option<Self> {
        self.0.checked_sub(minutes).map(Minute)
    }

    pub fn prev(self) -> Option<Self> {
        self.checked_sub(1)
    }

    pub fn next(self) -> Option<Self> {
        self.checked_add(1)
    }

    /// Every minute of the day in order.
    pub fn all() -> impl DoubleEndedIterator<Item = Minute> + ExactSizeIterator {
        (0..MINUTES_PER_DAY).map(Minute)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseMinuteError(String);

impl fmt::Display for ParseMinuteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid clock time {:?}, expected HH:MM", self.0)
    }
}

impl std::error::Error for ParseMinuteError {}

impl FromStr for Minute {
    type Err = ParseMinuteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseMinuteError(s.to_owned());
        let (h, m) = s.split_once(':').ok_or_else(err)?;
        if h.is_empty() || h.len() > 2 || m.len() != 2 {
            return Err(err());
        }
        if !h.bytes().chain(m.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let hour: u16 = h.parse().map_err(|_| err())?;
        let minute: u16 = m.parse().map_err(|_| err())?;
        Minute::hm(hour, minute).ok_or_else(err)
    }
}

impl fmt::Display for Minute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02}:{:02}", self.hour(), self.minute())
    }
}

impl Serialize for Minute {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Minute {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
