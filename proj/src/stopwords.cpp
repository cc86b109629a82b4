#include <fstream>
#include <string>
#include <unordered_set>

#include "wnsearch/error.hpp"
#include "wnsearch/text.hpp"

namespace wnsearch {

namespace {

// English function words: articles, pronouns, prepositions, conjunctions,
// auxiliary and modal verb forms, and high-frequency adverbs. Content words
// are deliberately absent so that every noun, verb and adjective can reach
// the WordNet lookup.
constexpr const char* kEnglishStopWords[] = {
    "a", "about", "above", "across", "after", "afterwards", "again", "against",
    "ago", "all", "almost", "alone", "along", "already", "also", "although",
    "always", "am", "among", "amongst", "an", "and", "another", "any",
    "anybody", "anyhow", "anyone", "anything", "anyway", "anywhere", "are", "aren",
    "around", "as", "at", "be", "became", "because", "become", "becomes",
    "becoming", "been", "before", "beforehand", "behind", "being", "below", "beside",
    "besides", "between", "beyond", "both", "but", "by", "can", "cannot",
    "could", "couldn", "d", "did", "didn", "do", "does", "doesn",
    "doing", "don", "done", "down", "during", "each", "either", "else",
    "elsewhere", "enough", "etc", "even", "ever", "every", "everybody", "everyone",
    "everything", "everywhere", "except", "few", "for", "former", "formerly", "from",
    "further", "furthermore", "had", "hadn", "has", "hasn", "have", "haven",
    "having", "he", "hence", "her", "here", "hereafter", "hereby", "herein",
    "hereupon", "hers", "herself", "him", "himself", "his", "how", "however",
    "i", "ie", "if", "in", "indeed", "inside", "into", "is",
    "isn", "it", "its", "itself", "just", "latter", "latterly", "least",
    "less", "ll", "m", "many", "may", "me", "meanwhile", "might",
    "mightn", "mine", "more", "moreover", "most", "mostly", "much", "must",
    "mustn", "my", "myself", "namely", "neither", "never", "nevertheless", "no",
    "nobody", "none", "noone", "nor", "not", "nothing", "now", "nowhere",
    "o", "of", "off", "often", "on", "once", "one", "only",
    "onto", "or", "other", "others", "otherwise", "ought", "our", "ours",
    "ourselves", "out", "over", "own", "per", "perhaps", "quite", "rather",
    "re", "s", "same", "shall", "shan", "she", "should", "shouldn",
    "since", "so", "some", "somebody", "somehow", "someone", "something", "sometime",
    "sometimes", "somewhat", "somewhere", "still", "such", "t", "than", "that",
    "the", "their", "theirs", "them", "themselves", "then", "thence", "there",
    "thereafter", "thereby", "therefore", "therein", "thereupon", "these", "they", "this",
    "those", "though", "through", "throughout", "thru", "thus", "to", "together",
    "too", "toward", "towards", "under", "unless", "until", "up", "upon",
    "us", "ve", "very", "via", "was", "wasn", "we", "were",
    "weren", "what", "whatever", "when", "whence", "whenever", "where", "whereafter",
    "whereas", "whereby", "wherein", "whereupon", "wherever", "whether", "which", "while",
    "whither", "who", "whoever", "whole", "whom", "whose", "why", "will",
    "with", "within", "without", "won", "would", "wouldn", "yet", "you",
    "your", "yours", "yourself", "yourselves", "accordingly", "albeit", "amid", "amidst",
    "anyways", "aside", "atop", "beneath", "consequently", "despite", "et", "hither",
    "howbeit", "inasmuch", "insofar", "instead", "lest", "likewise", "maybe", "midst",
    "nonetheless", "notwithstanding", "oneself", "thee", "thereof", "thine", "thou", "thy",
    "underneath", "unlike", "unto", "versus", "whatsoever", "whereof", "whomever", "ya",
};

}  // namespace

const StopWords& StopWords::english() {
    static const StopWords words = [] {
        std::unordered_set<std::string> set;
        for (const char* w : kEnglishStopWords) set.emplace(w);
        return StopWords(std::move(set));
    }();
    return words;
}

StopWords StopWords::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open stop-word list " + path.string());
    std::unordered_set<std::string> set;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        std::string word = line.substr(start);
        for (char& c : word) {
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        }
        set.insert(std::move(word));
    }
    return StopWords(std::move(set));
}

}  // namespace wnsearch
