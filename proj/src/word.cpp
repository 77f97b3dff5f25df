#include "evm/word.hpp"

#include <algorithm>
#include <cctype>

#include "evm/errors.hpp"

namespace evm {

bool is_valid_symbol(std::string_view symbol) {
    if (symbol.empty()) return false;
    return std::none_of(symbol.begin(), symbol.end(),
                        [](unsigned char c) { return std::isspace(c) != 0; });
}

Alphabet::Alphabet(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw AlphabetError("alphabet must not be empty");
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (!is_valid_symbol(symbols_[i]))
            throw AlphabetError("invalid symbol '" + symbols_[i] + "'");
        if (!index_.emplace(symbols_[i], i).second)
            throw AlphabetError("duplicate symbol '" + symbols_[i] + "'");
    }
}

Alphabet::Alphabet(std::initializer_list<const char*> symbols)
    : Alphabet(std::vector<Symbol>(symbols.begin(), symbols.end())) {}

bool Alphabet::contains(std::string_view symbol) const {
    return index_.find(Symbol(symbol)) != index_.end();
}

std::optional<std::size_t> Alphabet::index_of(std::string_view symbol) const {
    auto it = index_.find(Symbol(symbol));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool Alphabet::contains_all(const Word& word) const {
    return std::all_of(word.begin(), word.end(),
                       [this](const Symbol& s) { return index_.count(s) != 0; });
}

bool Alphabet::is_subset_of(const Alphabet& other) const {
    return std::all_of(symbols_.begin(), symbols_.end(),
                       [&other](const Symbol& s) { return other.contains(s); });
}

bool Alphabet::same_symbols(const Alphabet& other) const {
    return size() == other.size() && is_subset_of(other);
}

Alphabet Alphabet::merged(const Alphabet& other) const {
    std::vector<Symbol> all = symbols_;
    for (const auto& s : other.symbols_)
        if (!contains(s)) all.push_back(s);
    return Alphabet(std::move(all));
}

Word parse_word(std::string_view text) {
    Word word;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j > i) word.emplace_back(text.substr(i, j - i));
        i = j;
    }
    return word;
}

std::string format_word(const Word& word) {
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i) out += ' ';
        out += word[i];
    }
    return out;
}

void require_word_over(const Alphabet& alphabet, const Word& word, std::string_view what) {
    for (std::size_t i = 0; i < word.size(); ++i)
        if (!alphabet.contains(word[i]))
            throw AlphabetError("symbol '" + word[i] + "' at position " + std::to_string(i) +
                                " is not in the alphabet of " + std::string(what));
}

void for_each_word(const Alphabet& alphabet, std::size_t max_len,
                   const std::function<bool(const Word&)>& visit) {
    if (!visit(Word{})) return;
    if (alphabet.empty()) return;
    const std::size_t k = alphabet.size();
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<std::size_t> digits(len, 0);
        Word word(len, alphabet[0]);
        while (true) {
            if (!visit(word)) return;
            std::size_t pos = len;
            while (pos > 0) {
                --pos;
                if (++digits[pos] < k) {
                    word[pos] = alphabet[digits[pos]];
                    break;
                }
                digits[pos] = 0;
                word[pos] = alphabet[0];
                if (pos == 0) goto next_length;
            }
        }
    next_length:;
    }
}

std::vector<Word> words_up_to(const Alphabet& alphabet, std::size_t max_len) {
    std::vector<Word> out;
    for_each_word(alphabet, max_len, [&out](const Word& w) {
        out.push_back(w);
        return true;
    });
    return out;
}

bool length_lex_less(const Alphabet& alphabet, const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) continue;
        auto ia = alphabet.index_of(a[i]);
        auto ib = alphabet.index_of(b[i]);
        if (ia && ib) return *ia < *ib;
        return a[i] < b[i];
    }
    return false;
}

}  // namespace evm
