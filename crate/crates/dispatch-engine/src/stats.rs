/// Where a dispatch spent its time, in nanoseconds.
///
/// The copy fields time the staging transfers on either side of the
/// kernel work; on host backends those are real memory copies, on the
/// device backend they are the upload and readback.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DispatchStats {
    pub copy_in_ns: u64,
    pub kernel_ns: u64,
    pub copy_out_ns: u64,
    /// Valid bytes the kernel ran over: `used * 16`.
    pub bytes_processed: u64,
}

impl DispatchStats {
    pub fn total_ns(&self) -> u64 {
        self.copy_in_ns + self.kernel_ns + self.copy_out_ns
    }

    /// Fold another dispatch's stats in; used when an operation spans
    /// several grids.
    pub fn accumulate(&mut self, other: &DispatchStats) {
        self.copy_in_ns += other.copy_in_ns;
        self.kernel_ns += other.kernel_ns;
        self.copy_out_ns += other.copy_out_ns;
        self.bytes_processed += other.bytes_processed;
    }
}
