#pragma once
// Host-side declarations for the packaged kernels.
