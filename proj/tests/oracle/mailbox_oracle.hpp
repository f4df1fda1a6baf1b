#pragma once

// Reference move generator used only by tests. Shares no code with the
// library: 10x12 mailbox board, its own FEN reader, copy-make legality.

#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

std::uint64_t perft(const std::string& fen, int depth);

/// Legal moves as sorted UCI strings ("e2e4", "e7e8q").
std::vector<std::string> legal_uci(const std::string& fen);

} // namespace oracle
