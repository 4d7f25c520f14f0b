#pragma once

// Transcriptions of the published matrices used as byte-for-byte fixtures.

namespace ssdec::fixtures {

inline constexpr const char* kProductHX = R"(
1111000000000000
0000111100000000
0000000011110000
0000000000001111
1000100010001000
0100010001000100
0010001000100010
0001000100010001
)";

inline constexpr const char* kToricHX = R"(
110000000100000100
011000000010000010
101000000001000001
000110000100100000
000011000010010000
000101000001001000
000000110000100100
000000011000010010
000000101000001001
)";

// 7x17 systematic-part of the product-code (24,7) generator.
inline constexpr const char* kProductA = R"(
11110000100010001
10001111000010001
10001000111100001
10001000100011110
11001100110011001
10101010101010101
10011001100110011
)";

// 8x25 systematic-part of the toric (33,8) generator.
inline constexpr const char* kToricA = R"(
1111100000000001100111111
1100011100000001010111111
1010010010000001000101110
1001000001110000101111111
1000001001001100011111111
1000000010101000001101101
1000100000010010100011011
1000000100000110010010111
)";

}  // namespace ssdec::fixtures
