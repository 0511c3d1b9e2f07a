public class ChangeCase {
    public char changeCase (char c) {
        char out = ' ';
        if (c > 'z') { out = c; }
        else if (c >= 'a') { out = (char)(c - 'a' + 'A'); }
        else if (c > 'Z')  { out = c; }
        else if (c >= 'A') { out = (char)(c - 'A' + 'a'); }
        else { out = c; }
        return out;
    }
}
