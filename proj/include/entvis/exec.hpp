#pragma once

namespace entvis {

// Execution policy for the data-parallel kernels (phase scans, replication
// batches). The serial path is the reference; the parallel path must produce
// bit-identical results, which the test suite asserts.
enum class Execution { serial, parallel };

}  // namespace entvis
