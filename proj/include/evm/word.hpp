#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace evm {

using Symbol = std::string;
using Word = std::vector<Symbol>;

/// Ordered set of distinct, whitespace-free symbols.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<Symbol> symbols);
    Alphabet(std::initializer_list<const char*> symbols);

    const std::vector<Symbol>& symbols() const noexcept { return symbols_; }
    std::size_t size() const noexcept { return symbols_.size(); }
    bool empty() const noexcept { return symbols_.empty(); }
    const Symbol& operator[](std::size_t i) const { return symbols_[i]; }

    bool contains(std::string_view symbol) const;
    std::optional<std::size_t> index_of(std::string_view symbol) const;
    bool contains_all(const Word& word) const;
    bool is_subset_of(const Alphabet& other) const;
    bool same_symbols(const Alphabet& other) const;

    /// Union, keeping this alphabet's order and appending new symbols of `other`.
    Alphabet merged(const Alphabet& other) const;

    bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

private:
    std::vector<Symbol> symbols_;
    std::unordered_map<Symbol, std::size_t> index_;
};

bool is_valid_symbol(std::string_view symbol);

/// Splits on whitespace. The empty string is the empty word.
Word parse_word(std::string_view text);

/// Space-joined symbols; the empty word formats as "".
std::string format_word(const Word& word);

/// Throws AlphabetError naming the first foreign symbol.
void require_word_over(const Alphabet& alphabet, const Word& word, std::string_view what);

/// Visits every word of length <= max_len in length-lexicographic order (alphabet order
/// on symbols). Stops early when the visitor returns false.
void for_each_word(const Alphabet& alphabet, std::size_t max_len,
                   const std::function<bool(const Word&)>& visit);

std::vector<Word> words_up_to(const Alphabet& alphabet, std::size_t max_len);

/// Length-lex order on words over `alphabet`.
bool length_lex_less(const Alphabet& alphabet, const Word& a, const Word& b);

}  // namespace evm
