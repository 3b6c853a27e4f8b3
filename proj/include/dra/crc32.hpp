#pragma once

#include <cstddef>
#include <cstdint>

namespace dra {

// CRC-32 (zlib/IEEE 802.3 polynomial, reflected). Used as the integrity
// footer of the binary dataset format.
uint32_t crc32(const void* data, size_t len, uint32_t seed = 0);

}  // namespace dra
