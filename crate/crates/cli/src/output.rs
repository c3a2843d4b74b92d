//! CSV rendering. Floats carry 17 significant digits so files round-trip.

/// `{:.16e}`: one leading digit plus sixteen decimals.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Empty cell for an undefined quantity.
pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Accumulates rows under a fixed header.
pub struct Csv {
    writer: csv::Writer<Vec<u8>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(header).expect("writing to memory");
        Self { writer }
    }

    /// Panics if the row width differs from the header.
    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        if let Err(e) = self.writer.write_record(cells) {
            panic!("row width does not match header: {e}");
        }
    }

    pub fn finish(self) -> String {
        let bytes = self.writer.into_inner().expect("flushing to memory");
        String::from_utf8(bytes).expect("cells are UTF-8")
    }
}
