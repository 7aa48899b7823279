#pragma once

// Built-in copies of data/stopwords.tr.txt and data/suffixes.tr.tsv.
// tests/test_simplifier.cpp checks that they stay identical to the files.

#include <string_view>

namespace dnlp::text::shipped {

inline constexpr std::string_view kStopwords = R"(# Turkish stopwords: one entry per line, two words on a line form a bigram.
# Bigrams are matched before single words.

# bigrams
ya da
ne de
hem de
bu nedenle
bu yüzden
öte yandan
diğer yandan
buna göre

# conjunctions and particles
ve
veya
ya
da
de
ile
ama
fakat
ancak
lakin
çünkü
ki
mi
mı
mu
mü
ise
yani
bile
dahi
hem
ne
eğer
hatta
oysa

# determiners and pronouns
bir
bu
şu
o
bunlar
şunlar
onlar
ben
sen
biz
siz
her
hiç
bazı
tüm
bütün
hangi
kendi

# postpositions and adverbs
için
gibi
kadar
göre
diye
daha
en
çok
az
sonra
önce
ayrıca
artık
değil
neden
nasıl
niçin
şey
)";

inline constexpr std::string_view kSuffixes = R"(# Turkish inflectional suffixes: suffix<TAB>min_stem_chars.
# Applied longest-first regardless of the order below.

# case endings
de	3
da	3
te	3
ta	3
e	4
a	4
i	4
ı	4
u	3
ü	3
# possessive
sı	3
si	3
su	3
sü	3
# plural
ler	2
lar	2
# genitive
in	4
ın	4
un	4
ün	4
nin	3
nın	3
nun	3
nün	3
# instrumental
ce	3
ca	3
# relative
ki	3
# verbal
mek	2
mak	2
ebileceği	2
abileceği	2
mektedir	2
maktadır	2
ülen	2
ulan	2
ilen	2
ılan	2
erek	3
arak	3
)";

}  // namespace dnlp::text::shipped
